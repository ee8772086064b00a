#include "dirac_front/grid.hpp"

#include <string>

#include "dirac_front/errors.hpp"

namespace dirac_front {

GridSpec make_grid(int dim, int n, double extent) {
  if (dim != 1 && dim != 3)
    throw ConfigError("grid dimension must be 1 or 3, got " + std::to_string(dim));
  if (n < 8 || (n & (n - 1)) != 0)
    throw ConfigError("points per axis must be a power of two >= 8, got " + std::to_string(n));
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw ConfigError("extent must be positive, got " + std::to_string(extent));
  return GridSpec{dim, n, extent};
}

bool horizon_ok(const GridSpec& grid, double carrier_radius, double t_max) {
  return grid.extent >= 2.0 * (carrier_radius + std::abs(t_max)) + 4.0 * grid.dx();
}

void require_horizon(const GridSpec& grid, double carrier_radius, double t_max) {
  if (!horizon_ok(grid, carrier_radius, t_max)) {
    throw ConfigError("horizon violation: extent " + std::to_string(grid.extent) +
                      " < 2*(R0 + T_max) + 4*dx = " +
                      std::to_string(2.0 * (carrier_radius + std::abs(t_max)) + 4.0 * grid.dx()));
  }
}

std::vector<Vec3> axis_directions(const GridSpec& grid) {
  std::vector<Vec3> out;
  for (int a = 0; a < grid.dim; ++a) {
    Vec3 e{0, 0, 0};
    e[a] = 1.0;
    out.push_back(e);
    out.push_back(-e);
  }
  return out;
}

Vec3 unit_direction(const GridSpec& grid, const Vec3& e) {
  for (int a = grid.dim; a < 3; ++a)
    if (e[a] != 0.0) throw ArgumentError("direction has components beyond the grid dimension");
  const double len = norm(e);
  if (!(len > 0.0)) throw ArgumentError("direction must be nonzero");
  return scaled(e, 1.0 / len);
}

}  // namespace dirac_front
