#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace dirac_front {

/// Real 3-vector; in dimension 1 only component 0 is used.
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

/// Uniform periodic lattice centered at the origin, together with its dual
/// momentum lattice.
///
/// Position sample j on an axis sits at x_j = (j - N/2) dx, so x = 0 is a lattice
/// point. Momentum index k (FFT order) carries p_k = 2 pi / L * k for k < N/2 and
/// 2 pi / L * (k - N) otherwise, covering {-N/2, ..., N/2 - 1} * 2 pi / L.
/// Voxels are stored row-major with axis 0 slowest.
struct GridSpec {
  int dim = 1;
  int n = 8;
  double extent = 1.0;

  double dx() const { return extent / n; }
  double dp() const { return 2.0 * std::numbers::pi / extent; }
  double cell_volume() const { return std::pow(dx(), dim); }
  double momentum_cell_volume() const { return std::pow(dp(), dim); }
  std::size_t voxel_count() const {
    std::size_t v = 1;
    for (int a = 0; a < dim; ++a) v *= static_cast<std::size_t>(n);
    return v;
  }

  double coordinate(int j) const { return (j - n / 2) * dx(); }
  double momentum(int k) const { return dp() * (k < n / 2 ? k : k - n); }

  /// Per-axis lattice indices of a flat voxel index.
  std::array<int, 3> unflatten(std::size_t idx) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      ijk[a] = static_cast<int>(idx % static_cast<std::size_t>(n));
      idx /= static_cast<std::size_t>(n);
    }
    return ijk;
  }
  std::size_t flatten(const std::array<int, 3>& ijk) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim; ++a) idx = idx * static_cast<std::size_t>(n) + ijk[a];
    return idx;
  }

  Vec3 position(std::size_t idx) const {
    const auto ijk = unflatten(idx);
    Vec3 x{0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = coordinate(ijk[a]);
    return x;
  }
  Vec3 momentum_vector(std::size_t idx) const {
    const auto ijk = unflatten(idx);
    Vec3 p{0, 0, 0};
    for (int a = 0; a < dim; ++a) p[a] = momentum(ijk[a]);
    return p;
  }

  /// Largest |x| reachable on the lattice.
  double max_radius() const { return 0.5 * extent * std::sqrt(static_cast<double>(dim)); }

  bool operator==(const GridSpec&) const = default;
};

/// Validated grid constructor: dim in {1, 3}, n a power of two >= 8, extent > 0.
GridSpec make_grid(int dim, int n, double extent);

/// Wrap-around-safe horizon: extent >= 2 (carrier_radius + t_max) + 4 dx.
bool horizon_ok(const GridSpec& grid, double carrier_radius, double t_max);
/// Throws ConfigError when the horizon condition fails.
void require_horizon(const GridSpec& grid, double carrier_radius, double t_max);

/// Axis unit vectors +e_0, -e_0, +e_1, -e_1, ... for the grid dimension.
std::vector<Vec3> axis_directions(const GridSpec& grid);

/// Returns e / |e|; throws ArgumentError on a zero vector or on components
/// outside the grid dimension.
Vec3 unit_direction(const GridSpec& grid, const Vec3& e);

}  // namespace dirac_front
