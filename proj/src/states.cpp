#include "dirac_front/states.hpp"

#include <cmath>
#include <random>

#include "dirac_front/errors.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/mass.hpp"
#include "dirac_front/parallel.hpp"

namespace dirac_front {

Spinor random_spinor(int components, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Spinor u(components);
  for (int c = 0; c < components; ++c) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    u(c) = cdouble(re, im);
  }
  return u / u.norm();
}

double bump_profile(double r) {
  if (!(std::abs(r) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

namespace {

Spinor checked_weights(const Spinor& u, int components) {
  if (u.size() != components)
    throw ArgumentError("spinor weights need " + std::to_string(components) + " components");
  const double n = u.norm();
  if (!(n > 0.0)) throw ArgumentError("spinor weights must be nonzero");
  return u / n;
}

}  // namespace

SpinorField bump_state(const GridSpec& grid, const Vec3& center, double rho, const Spinor& u,
                       double m, Representation rep) {
  if (!(rho > 2.0 * grid.dx()))
    throw ResolutionError("bump radius " + std::to_string(rho) + " must exceed 2 dx = " +
                          std::to_string(2.0 * grid.dx()));
  if (!(norm(center) + rho < 0.5 * grid.extent))
    throw ConfigError("bump carrier does not fit inside the grid");
  SpinorField psi(grid, Space::position, rep, m);
  const Spinor w = checked_weights(u, psi.components());
  parallel_for(psi.voxels(), [&](std::size_t i) {
    const double f = bump_profile(norm(grid.position(i) - center) / rho);
    if (f == 0.0) return;
    for (int c = 0; c < psi.components(); ++c) psi.at(c, i) = f * w(c);
  });
  return psi.normalized();
}

MomentumBump momentum_bump_state(const GridSpec& grid, const Vec3& p_center, double p_radius,
                                 const Spinor& u, double m, Representation rep) {
  if (!(p_radius > 2.0 * grid.dp()))
    throw ResolutionError("momentum bump radius must exceed 2 dp = " + std::to_string(2.0 * grid.dp()));
  SpinorField phi(grid, Space::momentum, rep, m);
  const Spinor w = checked_weights(u, phi.components());
  parallel_for(phi.voxels(), [&](std::size_t i) {
    const double f = bump_profile(norm(grid.momentum_vector(i) - p_center) / p_radius);
    if (f == 0.0) return;
    for (int c = 0; c < phi.components(); ++c) phi.at(c, i) = f * w(c);
  });
  MomentumBump out{phi.normalized().to_position(), 0.0, false};
  const double p_min = norm(p_center) - p_radius;
  if (p_min > 0.0) {
    out.v = p_min / std::sqrt(p_min * p_min + m * m);
  } else {
    out.v_zero = true;
  }
  return out;
}

bool is_lattice_vector(const GridSpec& grid, const Vec3& b) {
  for (int a = 0; a < 3; ++a) {
    if (a >= grid.dim) {
      if (b[a] != 0.0) return false;
      continue;
    }
    const double k = b[a] / grid.dx();
    if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, std::abs(k))) return false;
  }
  return true;
}

SpinorField translate(const SpinorField& psi, const Vec3& b) {
  const GridSpec& grid = psi.grid();
  if (!is_lattice_vector(grid, b)) throw ArgumentError("translation must be a lattice vector");
  std::array<int, 3> shift{0, 0, 0};
  for (int a = 0; a < grid.dim; ++a) shift[a] = static_cast<int>(std::lround(b[a] / grid.dx()));
  const SpinorField src = psi.to_position();
  SpinorField out(grid, Space::position, psi.representation(), psi.mass());
  const int n = grid.n;
  parallel_for(src.voxels(), [&](std::size_t i) {
    auto ijk = grid.unflatten(i);
    for (int a = 0; a < grid.dim; ++a) ijk[a] = ((ijk[a] + shift[a]) % n + n) % n;
    const std::size_t j = grid.flatten(ijk);
    for (int c = 0; c < src.components(); ++c) out.at(c, j) = src.at(c, i);
  });
  return out;
}

SpinorField time_reverse(const SpinorField& psi) {
  if (psi.representation() != Representation::weyl)
    throw ConfigError("time reversal is defined in the Weyl representation");
  const SpinorField src = psi.to_position();
  SpinorField out(src.grid(), Space::position, src.representation(), src.mass());
  const SpinMatrix omega = src.algebra().omega;
  parallel_for(src.voxels(), [&](std::size_t i) {
    out.set_spinor(i, omega * src.spinor(i).conjugate());
  });
  return out;
}

NiseState nise_state(const SpinorField& psi1, const Vec3& e, double tau, double delta_shift,
                     const BaseTurning& base) {
  if (!(delta_shift >= 0.0)) throw ArgumentError("delta_shift must be non-negative");
  if (std::abs(tau) > delta_shift * (1.0 + 1e-12))
    throw ArgumentError("nise_state requires |tau| <= delta_shift");
  const Vec3 u = unit_direction(psi1.grid(), e);
  const SpinorField first = psi1.to_position();
  SpinorField second = translate(evolve(first, tau), scaled(u, delta_shift));
  second += first;
  return {second.normalized(), tau, delta_shift, base.t_e, base.t_ebar - tau};
}

namespace {

double lattice_ceiling(const GridSpec& grid, double x) {
  const double k = std::ceil(x / grid.dx() - 1e-9);
  return std::max(0.0, k) * grid.dx();
}

}  // namespace

NiseState trembling_state(const SpinorField& psi1, const Vec3& e, double t1, double t2,
                          const BaseTurning& base, std::optional<double> delta_shift) {
  const double tau = (base.t_ebar - base.t_e) - (t2 - t1);
  const double shift = delta_shift ? *delta_shift : lattice_ceiling(psi1.grid(), std::abs(tau));
  NiseState s = nise_state(psi1, e, tau, shift, base);
  // t_e(psi_s) = t_e(psi) - s
  const double s_time = s.predicted_t_e - t1;
  if (s_time != 0.0) s.field = evolve(s.field, s_time).to_position();
  s.predicted_t_e -= s_time;
  s.predicted_t_ebar -= s_time;
  return s;
}

BaseTurning measure_base_turning(const SpinorField& psi, const Vec3& e, double window, int steps,
                                 double delta) {
  const auto tt = measure_turning_times(psi, e, linspace(-window, window, steps), delta);
  return {tt.e.t_e, tt.ebar.t_e};
}

DsabtpState dsabtp_state(const GridSpec& grid, const Vec3& e, double a, double b, double tau,
                         double m, std::uint64_t seed, Representation rep,
                         std::optional<BaseTurning> base) {
  if (!(a < b)) throw ArgumentError("dsabtp_state requires a < b");
  const double half = 0.5 * (b - a);
  if (!(std::abs(tau) < half)) throw ArgumentError("dsabtp_state requires |tau| < (b - a)/2");
  const Vec3 u = unit_direction(grid, e);
  const double rho = half - std::abs(tau);
  const double center = 0.5 * (a + b);
  const int comps = grid.dim == 3 ? 4 : 2;
  const SpinorField seed_bump = bump_state(grid, scaled(u, center), rho, random_spinor(comps, seed), m, rep);

  DsabtpState out{seed_bump, rho, tau, {}, 0.0};
  out.base = base ? *base : measure_base_turning(seed_bump, u, 2.5 * rho, 41);

  // eta: symmetric turning times t_e = t_ebar = 0
  SpinorField eta = seed_bump;
  const double tau_n = out.base.t_ebar - out.base.t_e;
  double t_common = out.base.t_e;
  if (std::abs(tau_n) >= 0.5 * grid.dx()) {
    out.delta_shift = lattice_ceiling(grid, std::abs(tau_n));
    eta = nise_state(seed_bump, u, tau_n, out.delta_shift, out.base).field;
  } else {
    t_common = 0.5 * (out.base.t_e + out.base.t_ebar);
  }
  if (t_common != 0.0) eta = evolve(eta, t_common).to_position();
  out.field = evolve(eta, -tau).to_position();
  return out;
}

SlabCut slab_cut(const SpinorField& psi, const Vec3& e, double alpha1, double alpha2) {
  if (!(alpha1 < alpha2)) throw ArgumentError("slab_cut requires alpha1 < alpha2");
  const Vec3 u = unit_direction(psi.grid(), e);
  const SpinorField src = psi.to_position();
  const GridSpec& grid = src.grid();
  SpinorField cut(grid, Space::position, src.representation(), src.mass());
  parallel_for(src.voxels(), [&](std::size_t i) {
    const double s = dot(grid.position(i), u);
    if (s < alpha1 || s > alpha2) return;
    for (int c = 0; c < src.components(); ++c) cut.at(c, i) = src.at(c, i);
  });
  const double total = src.squared_norm();
  if (!(total > 0.0)) throw UndefinedStateError("slab_cut of the zero field");
  const double kept = cut.squared_norm();
  if (!(kept > 0.0)) throw EmptyCutError("slab cut removed the whole state");
  return {cut.normalized(), kept / total};
}

}  // namespace dirac_front
