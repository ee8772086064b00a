#include "dirac_front/mass.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "dirac_front/errors.hpp"
#include "dirac_front/parallel.hpp"

namespace dirac_front {

namespace {

struct AxisDirection {
  int axis;
  double sign;
};

std::optional<AxisDirection> as_axis(const GridSpec& grid, const Vec3& e) {
  for (int a = 0; a < grid.dim; ++a) {
    if (std::abs(e[a]) != 1.0) continue;
    bool others_zero = true;
    for (int b = 0; b < 3; ++b)
      if (b != a && e[b] != 0.0) others_zero = false;
    if (others_zero) return AxisDirection{a, e[a]};
  }
  return std::nullopt;
}

// Mass per lattice plane orthogonal to `axis`.
std::vector<double> plane_marginals(const GridSpec& grid, const std::vector<double>& w, int axis) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  std::vector<double> m(n, 0.0);
  if (grid.dim == 1) return w;
  // Each plane is summed sequentially in the same order regardless of threads.
  const std::size_t stride = axis == 0 ? n * n : (axis == 1 ? n : 1);
  parallel_for(n, [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        std::size_t idx;
        if (axis == 0) idx = j * stride + u * n + v;
        else if (axis == 1) idx = u * n * n + j * stride + v;
        else idx = u * n * n + v * n + j;
        s += w[idx];
      }
    }
    m[j] = s;
  });
  return m;
}

double total_of(const std::vector<double>& w) {
  const double total = blocked_sum(w.size(), [&](std::size_t i) { return w[i]; });
  if (!(total > 0.0)) throw UndefinedStateError("mass functional of the zero field");
  return total;
}

std::vector<double> position_density(const SpinorField& psi) {
  return psi.space() == Space::position ? psi.density() : psi.to_position().density();
}

}  // namespace

double half_space_mass(const SpinorField& psi, const Vec3& e, double alpha) {
  const GridSpec& grid = psi.grid();
  const auto w = position_density(psi);
  const double total = total_of(w);
  if (auto ax = as_axis(grid, e)) {
    const auto m = plane_marginals(grid, w, ax->axis);
    double s = 0.0;
    for (int j = 0; j < grid.n; ++j)
      if (ax->sign * grid.coordinate(j) <= alpha) s += m[j];
    return s / total;
  }
  const double s = blocked_sum(w.size(), [&](std::size_t i) {
    return dot(grid.position(i), e) <= alpha ? w[i] : 0.0;
  });
  return s / total;
}

double shell_mass(const SpinorField& psi, double r_in, double r_out) {
  if (r_in > r_out) throw ArgumentError("shell_mass: r_in > r_out");
  if (r_in < 0.0) throw ArgumentError("shell_mass: negative radius");
  const GridSpec& grid = psi.grid();
  const auto w = position_density(psi);
  const double total = total_of(w);
  const double s = blocked_sum(w.size(), [&](std::size_t i) {
    const double r = norm(grid.position(i));
    return (r >= r_in && r <= r_out) ? w[i] : 0.0;
  });
  return s / total;
}

double outside_ball_mass(const SpinorField& psi, double r) {
  const GridSpec& grid = psi.grid();
  const auto w = position_density(psi);
  const double total = total_of(w);
  const double s = blocked_sum(w.size(), [&](std::size_t i) {
    return norm(grid.position(i)) > r ? w[i] : 0.0;
  });
  return s / total;
}

double carrier_quantile(const GridSpec& grid, const std::vector<double>& w, const Vec3& e,
                        double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  const double total = total_of(w);
  const double threshold = delta * total;
  if (auto ax = as_axis(grid, e)) {
    const auto m = plane_marginals(grid, w, ax->axis);
    double cum = 0.0;
    for (int step = 0; step < grid.n; ++step) {
      const int j = ax->sign > 0 ? step : grid.n - 1 - step;
      cum += m[j];
      if (cum > threshold) return ax->sign * grid.coordinate(j);
    }
    return ax->sign * grid.coordinate(ax->sign > 0 ? grid.n - 1 : 0);
  }
  std::vector<std::pair<double, double>> proj;
  proj.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) proj.emplace_back(dot(grid.position(i), e), w[i]);
  std::sort(proj.begin(), proj.end());
  double cum = 0.0;
  for (std::size_t k = 0; k < proj.size();) {
    const double s = proj[k].first;
    while (k < proj.size() && proj[k].first == s) cum += proj[k++].second;
    if (cum > threshold) return s;
  }
  return proj.back().first;
}

double carrier_radius(const SpinorField& psi, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  const GridSpec& grid = psi.grid();
  const auto w = position_density(psi);
  const double total = total_of(w);
  std::vector<std::pair<double, double>> radial;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) radial.emplace_back(norm(grid.position(i)), w[i]);
  std::sort(radial.begin(), radial.end(), std::greater<>());
  // Walk inward from the largest radius until the excluded mass would exceed delta.
  double outside = 0.0;
  for (std::size_t k = 0; k < radial.size();) {
    const double r = radial[k].first;
    double group = 0.0;
    while (k < radial.size() && radial[k].first == r) group += radial[k++].second;
    if (outside + group > delta * total) return r;
    outside += group;
  }
  return 0.0;
}

}  // namespace dirac_front
