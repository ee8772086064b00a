#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dirac_front/grid.hpp"

namespace dirac_front {

using cdouble = std::complex<double>;

/// Spinor-space matrix, at most 4x4, stored without heap allocation.
using SpinMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Spinor = Eigen::Matrix<cdouble, Eigen::Dynamic, 1, 0, 4, 1>;

enum class Representation { weyl, dirac };

std::string to_string(Representation rep);
Representation representation_from_string(const std::string& name);

/// alpha_1..alpha_d, beta and the time-reversal matrix omega.
///
/// dim 3: 4x4 matrices. Weyl: alpha_k = diag(sigma_k, -sigma_k), beta = offdiag(I, I),
/// omega = -diag(sigma_2, sigma_2). Dirac: alpha_k = offdiag(sigma_k, sigma_k),
/// beta = diag(I, -I); the basis change between the two is real and commutes with omega,
/// so omega = -diag(sigma_2, sigma_2) in both.
/// dim 1: 2x2 with alpha = sigma_1, beta = sigma_3 in both representations; omega = sigma_3.
struct DiracAlgebra {
  Representation representation = Representation::weyl;
  int dim = 3;
  std::vector<SpinMatrix> alpha;
  SpinMatrix beta;
  SpinMatrix omega;

  int components() const { return static_cast<int>(beta.rows()); }
};

DiracAlgebra dirac_algebra(Representation rep, int dim);

/// Pauli matrices sigma_1..sigma_3 (index 1..3); index 0 gives the identity.
SpinMatrix pauli(int k);

/// h(p) = sum_k alpha_k p_k + beta m.
SpinMatrix h_matrix(const Vec3& p, double m, const DiracAlgebra& alg);

/// epsilon(p) = sqrt(p^2 + m^2).
inline double energy(const Vec3& p, double m) { return std::sqrt(dot(p, p) + m * m); }

/// pi^eta(p) = (I + eta h(p) / epsilon(p)) / 2, eta = +1 or -1.
SpinMatrix energy_projector(const Vec3& p, double m, int eta, const DiracAlgebra& alg);

}  // namespace dirac_front
