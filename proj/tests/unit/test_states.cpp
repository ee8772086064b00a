#include <random>

#include "dirac_front/border.hpp"
#include "dirac_front/errors.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/mass.hpp"
#include "dirac_front/states.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace dirac_front;

namespace {

const GridSpec kLine = make_grid(1, 1024, 12.8);

// The Nyquist mode is its own reflection on the lattice, so time reversal cannot commute with it.
SpinorField drop_nyquist(const SpinorField& psi) {
  SpinorField phi = psi.to_momentum();
  const GridSpec& g = psi.grid();
  const double nyq = g.momentum(g.n / 2);
  for (std::size_t i = 0; i < phi.voxels(); ++i) {
    const Vec3 p = g.momentum_vector(i);
    bool edge = false;
    for (int a = 0; a < g.dim; ++a) edge = edge || p[a] == nyq;
    if (edge)
      for (int c = 0; c < phi.components(); ++c) phi.at(c, i) = 0.0;
  }
  return phi.to_position();
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("random spinor is normalized and seeded") {
  const Spinor a = random_spinor(4, 11);
  CHECK(a.norm() == doctest::Approx(1.0));
  CHECK((a - random_spinor(4, 11)).norm() == 0.0);
  CHECK((a - random_spinor(4, 12)).norm() > 0.0);
}

TEST_CASE("bump state") {
  const GridSpec g = make_grid(3, 32, 8.0);
  Spinor u = Spinor::Zero(4);
  u(0) = 1.0;
  const SpinorField psi = bump_state(g, {0.5, 0, 0}, 1.0, u, 1.0);
  CHECK(psi.squared_norm() == doctest::Approx(1.0));
  double other = 0.0;
  for (int c = 1; c < 4; ++c)
    for (const auto& v : psi.component(c)) other += std::norm(v);
  CHECK(other == 0.0);
  CHECK(bump_profile(0.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump_profile(1.0) == 0.0);
  CHECK_THROWS_AS(bump_state(g, {0, 0, 0}, 0.4, u, 1.0), ResolutionError);
  CHECK_THROWS_AS(bump_state(g, {3.5, 0, 0}, 1.0, u, 1.0), ConfigError);
  CHECK_THROWS_AS(bump_state(g, {0, 0, 0}, 1.0, Spinor::Zero(4), 1.0), ArgumentError);
}

TEST_CASE("momentum bump velocity bound") {
  const GridSpec g = make_grid(1, 512, 64.0);
  const MomentumBump a = momentum_bump_state(g, {2.0, 0, 0}, 0.5, random_spinor(2, 1), 1.0);
  CHECK_FALSE(a.v_zero);
  CHECK(a.v == doctest::Approx(1.5 / std::sqrt(1.5 * 1.5 + 1.0)));
  const MomentumBump b = momentum_bump_state(g, {0, 0, 0}, 0.5, random_spinor(2, 1), 1.0);
  CHECK(b.v_zero);
  CHECK_THROWS_AS(momentum_bump_state(g, {1, 0, 0}, 0.15, random_spinor(2, 1), 1.0), ResolutionError);
}

TEST_CASE("translation") {
  const GridSpec g = make_grid(3, 16, 4.0);
  const SpinorField psi = testing::random_state(g, 4);
  CHECK(translate(psi, {0, 0, 0}).max_abs_difference(psi) == 0.0);
  CHECK(translate(translate(psi, {0.25, -0.5, 0.75}), {-0.25, 0.5, -0.75}).max_abs_difference(psi) == 0.0);
  CHECK_THROWS_AS(translate(psi, {0.1, 0, 0}), ArgumentError);
  CHECK(is_lattice_vector(g, {0.5, 0.25, -1.0}));
  CHECK_FALSE(is_lattice_vector(g, {0.3, 0, 0}));
}

TEST_CASE("time reversal") {
  const GridSpec g = make_grid(3, 16, 6.0);
  const SpinorField psi = drop_nyquist(testing::random_state(g, 6));
  const SpinorField tpsi = time_reverse(psi);
  CHECK(tpsi.squared_norm() == doctest::Approx(psi.squared_norm()));
  SpinorField minus = psi;
  minus *= -1.0;
  CHECK(time_reverse(tpsi).max_abs_difference(minus) < 1e-15);
  // (T psi)_t = T psi_{-t}
  CHECK(evolve(tpsi, 0.6).max_abs_difference(time_reverse(evolve(psi, -0.6))) < 1e-10);
  const GridSpec g1 = make_grid(1, 128, 6.0);
  const SpinorField psi1 = drop_nyquist(testing::random_state(g1, 2));
  CHECK(time_reverse(time_reverse(psi1)).max_abs_difference(psi1) < 1e-15);
  CHECK(evolve(time_reverse(psi1), 0.6).max_abs_difference(time_reverse(evolve(psi1, -0.6))) < 1e-10);
  const SpinorField dirac = testing::random_state(g, 6, 1.0, Representation::dirac);
  CHECK_THROWS_AS(time_reverse(dirac), ConfigError);
}

TEST_CASE("shifted superposition predictions agree with measured turning times") {
  const SpinorField psi1 = bump_state(kLine, {0, 0, 0}, 0.5, random_spinor(2, 21), 1.0);
  const auto times = linspace(-1.5, 1.5, 61);
  const double step = times[1] - times[0];
  const BaseTurning base = measure_base_turning(psi1, {1, 0, 0}, 1.5, 61);
  for (double tau : {0.0, 0.1, -0.2}) {
    for (double shift : {0.25, 0.5}) {
      const NiseState ns = nise_state(psi1, {1, 0, 0}, tau, shift, base);
      CHECK(ns.field.squared_norm() == doctest::Approx(1.0));
      const TurningTimes tt = measure_turning_times(ns.field, {1, 0, 0}, times);
      CHECK(std::abs(tt.e.t_e - ns.predicted_t_e) <= 2 * step);
      CHECK(std::abs(tt.ebar.t_e - ns.predicted_t_ebar) <= 2 * step);
    }
  }
  CHECK_THROWS_AS(nise_state(psi1, {1, 0, 0}, 0.3, 0.25), ArgumentError);
}

TEST_CASE("trembling state reproduces prescribed turning times") {
  const SpinorField psi1 = bump_state(kLine, {0, 0, 0}, 0.5, random_spinor(2, 11), 1.0);
  const BaseTurning base = measure_base_turning(psi1, {1, 0, 0}, 1.25, 41);
  const NiseState ns = trembling_state(psi1, {1, 0, 0}, 0.0, 0.3, base);
  CHECK(ns.predicted_t_e == doctest::Approx(0.0));
  CHECK(ns.predicted_t_ebar == doctest::Approx(0.3));
  const auto times = linspace(-1.5, 1.5, 61);
  const TurningTimes tt = measure_turning_times(ns.field, {1, 0, 0}, times);
  CHECK(std::abs(tt.e.t_e - 0.0) <= 0.1);
  CHECK(std::abs(tt.ebar.t_e - 0.3) <= 0.1);
}

TEST_CASE("slab-symmetric state has symmetric turning times inside the slab") {
  const GridSpec g = make_grid(1, 1024, 12.8);
  const DsabtpState st = dsabtp_state(g, {1, 0, 0}, -1.0, 1.0, 0.4, 1.0, 3);
  CHECK(st.rho == doctest::Approx(0.6));
  const TurningTimes tt = measure_turning_times(st.field, {1, 0, 0}, linspace(-2.0, 2.0, 81));
  CHECK(std::abs(tt.e.t_e - 0.4) <= 0.1);
  CHECK(std::abs(tt.ebar.t_e - 0.4) <= 0.1);
  CHECK(border(st.field, {1, 0, 0}) >= -1.0 - 2 * g.dx());
  CHECK(-border(st.field, {-1, 0, 0}) <= 1.0 + 2 * g.dx());
  CHECK_THROWS_AS(dsabtp_state(g, {1, 0, 0}, 1.0, -1.0, 0.0, 1.0, 3), ArgumentError);
  CHECK_THROWS_AS(dsabtp_state(g, {1, 0, 0}, -1.0, 1.0, 1.0, 1.0, 3), ArgumentError);
}

TEST_CASE("slab cut") {
  const SpinorField psi = bump_state(kLine, {0, 0, 0}, 0.5, random_spinor(2, 5), 1.0);
  const SlabCut all = slab_cut(psi, {1, 0, 0}, -1.0, 1.0);
  CHECK(all.kept_fraction == doctest::Approx(1.0));
  CHECK(all.field.max_abs_difference(psi) < 1e-14);
  const SlabCut left = slab_cut(psi, {1, 0, 0}, -1.0, 0.1);
  const SlabCut right = slab_cut(psi, {1, 0, 0}, 0.1 + 1e-9, 1.0);
  CHECK(left.kept_fraction + right.kept_fraction == doctest::Approx(1.0));
  CHECK(border(left.field, {-1, 0, 0}) >= -0.1 - 1e-12);
  CHECK_THROWS_AS(slab_cut(psi, {1, 0, 0}, 2.0, 3.0), EmptyCutError);
  CHECK_THROWS_AS(slab_cut(psi, {1, 0, 0}, 0.5, 0.5), ArgumentError);
}

}  // TEST_SUITE
