#include <Eigen/Eigenvalues>
#include <random>

#include "dirac_front/algebra.hpp"
#include "dirac_front/errors.hpp"
#include "dirac_front/grid.hpp"
#include "doctest.h"

using namespace dirac_front;

namespace {

double matrix_defect(const SpinMatrix& a, const SpinMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

SpinMatrix identity(int n) { return SpinMatrix::Identity(n, n); }

}  // namespace

TEST_SUITE("grid_algebra") {

TEST_CASE("grid lattice conventions") {
  const GridSpec g = make_grid(3, 16, 4.0);
  CHECK(g.dx() == doctest::Approx(0.25));
  CHECK(g.coordinate(8) == 0.0);
  CHECK(g.coordinate(0) == doctest::Approx(-2.0));
  CHECK(g.momentum(1) == doctest::Approx(2.0 * std::numbers::pi / 4.0));
  CHECK(g.momentum(15) == doctest::Approx(-2.0 * std::numbers::pi / 4.0));
  CHECK(g.momentum(8) == doctest::Approx(-8.0 * 2.0 * std::numbers::pi / 4.0));
  for (std::size_t i : {0ul, 17ul, 4095ul, 1234ul}) CHECK(g.flatten(g.unflatten(i)) == i);
  CHECK(g.voxel_count() == 4096);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(2, 16, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(3, 60, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 4, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(1, 64, 0.0), ConfigError);
  const GridSpec g = make_grid(3, 64, 8.0);
  // L >= 2 (0.5 + 1) + 4 dx
  CHECK(horizon_ok(g, 0.5, 1.0));
  CHECK_FALSE(horizon_ok(make_grid(3, 64, 2.5), 0.5, 1.0));
  CHECK_THROWS_AS(require_horizon(make_grid(3, 64, 2.5), 0.5, 1.0), ConfigError);
}

TEST_CASE("directions") {
  const GridSpec g3 = make_grid(3, 8, 1.0);
  CHECK(axis_directions(g3).size() == 6);
  CHECK(axis_directions(make_grid(1, 8, 1.0)).size() == 2);
  const Vec3 u = unit_direction(g3, {3, 4, 0});
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK_THROWS_AS(unit_direction(g3, {0, 0, 0}), ArgumentError);
  CHECK_THROWS_AS(unit_direction(make_grid(1, 8, 1.0), {0, 1, 0}), ArgumentError);
}

TEST_CASE("Clifford relations in every representation") {
  for (int dim : {1, 3}) {
    for (auto rep : {Representation::weyl, Representation::dirac}) {
      const DiracAlgebra alg = dirac_algebra(rep, dim);
      const int n = alg.components();
      CHECK(n == (dim == 3 ? 4 : 2));
      for (int j = 0; j < dim; ++j) {
        CHECK(matrix_defect(alg.alpha[j] * alg.beta + alg.beta * alg.alpha[j], SpinMatrix::Zero(n, n)) < 1e-15);
        CHECK(matrix_defect(alg.alpha[j].adjoint(), alg.alpha[j]) < 1e-15);
        for (int k = 0; k < dim; ++k) {
          const SpinMatrix ac = alg.alpha[j] * alg.alpha[k] + alg.alpha[k] * alg.alpha[j];
          CHECK(matrix_defect(ac, (j == k ? 2.0 : 0.0) * identity(n)) < 1e-15);
        }
      }
      CHECK(matrix_defect(alg.beta * alg.beta, identity(n)) < 1e-15);
    }
  }
}

TEST_CASE("omega reverses the momentum terms") {
  for (int dim : {1, 3}) {
    const DiracAlgebra alg = dirac_algebra(Representation::weyl, dim);
    const SpinMatrix w = alg.omega;
    const SpinMatrix winv = w.inverse();
    for (int k = 0; k < dim; ++k) CHECK(matrix_defect(w * alg.alpha[k].conjugate() * winv, -alg.alpha[k]) < 1e-15);
    CHECK(matrix_defect(w * alg.beta.conjugate() * winv, alg.beta) < 1e-15);
  }
  const DiracAlgebra a3 = dirac_algebra(Representation::weyl, 3);
  // omega conj(omega) = -I in 3D
  CHECK(matrix_defect(a3.omega * a3.omega.conjugate(), -identity(4)) < 1e-15);
}

TEST_CASE("h(p)^2 = eps^2 and the spectrum of h is {+-eps}") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 p{gauss(rng), gauss(rng), gauss(rng)};
    const double m = std::abs(gauss(rng));
    for (auto rep : {Representation::weyl, Representation::dirac}) {
      const DiracAlgebra alg = dirac_algebra(rep, 3);
      const SpinMatrix h = h_matrix(p, m, alg);
      const double e = energy(p, m);
      CHECK(matrix_defect(h * h, e * e * identity(4)) < 1e-12 * (1 + e * e));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es{Eigen::Matrix4cd(h)};
      CHECK(es.eigenvalues()(0) == doctest::Approx(-e).epsilon(1e-12));
      CHECK(es.eigenvalues()(3) == doctest::Approx(e).epsilon(1e-12));
      for (int eta : {1, -1}) {
        const SpinMatrix pi = energy_projector(p, m, eta, alg);
        CHECK(matrix_defect(pi * pi, pi) < 1e-13);
        CHECK(std::abs(pi.trace() - cdouble(2.0)) < 1e-13);
      }
      CHECK(matrix_defect(energy_projector(p, m, 1, alg) + energy_projector(p, m, -1, alg), identity(4)) < 1e-14);
    }
  }
}

TEST_CASE("representation names") {
  CHECK(representation_from_string("weyl") == Representation::weyl);
  CHECK(representation_from_string("dirac") == Representation::dirac);
  CHECK(to_string(Representation::dirac) == "dirac");
  CHECK_THROWS_AS(representation_from_string("majorana"), ConfigError);
}

}  // TEST_SUITE
