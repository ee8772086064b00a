#include <Eigen/Eigenvalues>
#include <random>

#include "dirac_front/errors.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/mass.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace dirac_front;
using dirac_front::testing::random_state;

namespace {

// e^{i t h} from the eigendecomposition of the Hermitian h(p).
SpinMatrix eig_exponential(const Vec3& p, double t, double m, const DiracAlgebra& alg) {
  const int n = alg.components();
  const Eigen::MatrixXcd h = h_matrix(p, m, alg);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(n);
  for (int i = 0; i < n; ++i) phases(i) = std::exp(cdouble(0.0, t * es.eigenvalues()(i)));
  const Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return u;
}

// Direct sum phi_k = (dx / sqrt(2 pi)) sum_j e^{-i p_k x_j} psi_j in 1D.
std::vector<cdouble> naive_transform(const GridSpec& g, std::span<const cdouble> psi) {
  std::vector<cdouble> out(static_cast<std::size_t>(g.n));
  for (int k = 0; k < g.n; ++k) {
    cdouble s = 0.0;
    for (int j = 0; j < g.n; ++j) s += std::exp(cdouble(0.0, -g.momentum(k) * g.coordinate(j))) * psi[j];
    out[static_cast<std::size_t>(k)] = s * g.dx() / std::sqrt(2.0 * std::numbers::pi);
  }
  return out;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("sinc branch") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-5) == doctest::Approx(std::sin(1e-5) / 1e-5).epsilon(1e-15));
  CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
  CHECK(sinc(-3.0) == sinc(3.0));
}

TEST_CASE("mode exponential matches the eigendecomposition oracle") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 4.0);
  for (int dim : {1, 3}) {
    for (auto rep : {Representation::weyl, Representation::dirac}) {
      const DiracAlgebra alg = dirac_algebra(rep, dim);
      for (int trial = 0; trial < 40; ++trial) {
        Vec3 p{gauss(rng), 0, 0};
        if (dim == 3) p = {gauss(rng), gauss(rng), gauss(rng)};
        const double m = std::abs(gauss(rng)) * 0.5;
        const double t = gauss(rng);
        const SpinMatrix a = mode_exponential(p, t, m, alg);
        const SpinMatrix b = eig_exponential(p, t, m, alg);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("FFT convention against a direct sum") {
  const GridSpec g = make_grid(1, 32, 5.0);
  SpinorField psi = random_state(g, 3);
  const SpinorField phi = psi.to_momentum();
  for (int c = 0; c < 2; ++c) {
    const auto ref = naive_transform(g, psi.component(c));
    for (int k = 0; k < g.n; ++k) CHECK(std::abs(phi.at(c, static_cast<std::size_t>(k)) - ref[static_cast<std::size_t>(k)]) < 1e-13);
  }
  CHECK(phi.to_position().max_abs_difference(psi) < 1e-14);
  CHECK(phi.squared_norm() == doctest::Approx(psi.squared_norm()).epsilon(1e-13));
}

TEST_CASE("plane wave is an eigenmode") {
  // psi(x) = e^{i p x} u with h(p) u = eps u evolves by e^{i t eps}.
  const GridSpec g = make_grid(1, 64, 8.0);
  const double m = 1.3;
  const Vec3 p{g.momentum(5), 0, 0};
  const DiracAlgebra alg = dirac_algebra(Representation::weyl, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(h_matrix(p, m, alg))};
  const Eigen::VectorXcd u = es.eigenvectors().col(1);
  SpinorField psi(g, Space::position, Representation::weyl, m);
  for (std::size_t i = 0; i < psi.voxels(); ++i)
    for (int c = 0; c < 2; ++c) psi.at(c, i) = std::exp(cdouble(0.0, p[0] * g.position(i)[0])) * u(c);
  const double t = 0.7;
  SpinorField expected = psi;
  expected *= std::exp(cdouble(0.0, t * energy(p, m)));
  CHECK(evolve(psi, t).max_abs_difference(expected) < 1e-12);
}

TEST_CASE("unitarity and group law on random states") {
  for (int dim : {1, 3}) {
    const GridSpec g = dim == 1 ? make_grid(1, 256, 8.0) : make_grid(3, 16, 8.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const SpinorField psi = random_state(g, seed);
      for (double t : {0.1, -0.5, 1.0}) {
        const SpinorField a = evolve(psi, t);
        CHECK(std::abs(a.squared_norm() - 1.0) < 1e-12);
        const SpinorField ab = evolve(a, 0.3);
        CHECK(ab.max_abs_difference(evolve(psi, t + 0.3)) < 1e-10);
        CHECK(evolve(a, -t).max_abs_difference(psi) < 1e-10);
      }
    }
  }
}

TEST_CASE("symmetric pair and propagator agree with evolve") {
  const GridSpec g = make_grid(1, 128, 8.0);
  const SpinorField psi = random_state(g, 9);
  const auto [plus, minus] = evolve_symmetric_pair(psi, 0.4);
  CHECK(plus.max_abs_difference(evolve(psi, 0.4) + evolve(psi, -0.4)) < 1e-12);
  CHECK(minus.max_abs_difference(evolve(psi, 0.4) - evolve(psi, -0.4)) < 1e-12);
  const Propagator prop(psi);
  CHECK(prop.at(0.4).max_abs_difference(evolve(psi, 0.4)) < 1e-13);
  CHECK(prop.nw_at(0.4, -1).max_abs_difference(evolve_nw(psi, 0.4, -1).to_position()) < 1e-13);
}

TEST_CASE("energy projections") {
  const GridSpec g = make_grid(3, 16, 6.0);
  const SpinorField psi = random_state(g, 5);
  const SpinorField pp = project_energy(psi, 1);
  const SpinorField pm = project_energy(psi, -1);
  CHECK((pp + pm).max_abs_difference(psi) < 1e-13);
  CHECK(std::abs(pp.inner(pm)) < 1e-13);
  CHECK(project_energy(pp, 1).max_abs_difference(pp) < 1e-13);
  // On a positive-energy state Dirac and NW (eta = +1) evolution coincide.
  CHECK(evolve(pp, 0.8).max_abs_difference(evolve_nw(pp, 0.8, 1)) < 1e-12);
  CHECK_THROWS_AS(project_energy(psi, 0), ArgumentError);
}

TEST_CASE("bump stays inside the light cone on a resolved lattice") {
  const GridSpec g = make_grid(1, 1024, 8.0);
  const SpinorField psi = bump_state(g, {0, 0, 0}, 0.5, random_spinor(2, 1), 1.0);
  for (double t : {0.25, -0.5, 1.0}) CHECK(outside_ball_mass(evolve(psi, t), 0.5 + std::abs(t) + 2 * g.dx()) < 1e-12);
}

}  // TEST_SUITE
