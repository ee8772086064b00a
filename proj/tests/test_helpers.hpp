#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "dirac_front/spinor_field.hpp"
#include "dirac_front/states.hpp"

namespace dirac_front::testing {

/// Smooth random superposition of bumps, for property tests.
inline SpinorField random_state(const GridSpec& g, std::uint64_t seed, double m = 1.0,
                                Representation rep = Representation::weyl) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int nc = g.dim == 3 ? 4 : 2;
  const double rho = std::max(0.25 * g.extent * (0.5 + 0.25 * (u(rng) + 1.0) / 2.0), 3.0 * g.dx());
  Vec3 c{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) c[a] = 0.1 * g.extent * u(rng);
  SpinorField psi = bump_state(g, c, rho, random_spinor(nc, rng()), m, rep);
  Vec3 c2{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) c2[a] = 0.1 * g.extent * u(rng);
  psi += bump_state(g, c2, 0.7 * rho, random_spinor(nc, rng()), m, rep);
  return psi.normalized();
}

inline double max_abs(const Spinor& s) {
  double v = 0.0;
  for (int i = 0; i < s.size(); ++i) v = std::max(v, std::abs(s(i)));
  return v;
}

}  // namespace dirac_front::testing
