#include "dirac_front/algebra.hpp"

#include "dirac_front/errors.hpp"

namespace dirac_front {

std::string to_string(Representation rep) {
  return rep == Representation::weyl ? "weyl" : "dirac";
}

Representation representation_from_string(const std::string& name) {
  if (name == "weyl") return Representation::weyl;
  if (name == "dirac") return Representation::dirac;
  throw ConfigError("unknown representation '" + name + "'");
}

SpinMatrix pauli(int k) {
  const cdouble i(0.0, 1.0);
  SpinMatrix s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw ArgumentError("Pauli index must be 0..3");
  }
  return s;
}

namespace {

SpinMatrix blocks(const SpinMatrix& a, const SpinMatrix& b, const SpinMatrix& c,
                  const SpinMatrix& d) {
  SpinMatrix m(4, 4);
  m.block(0, 0, 2, 2) = a;
  m.block(0, 2, 2, 2) = b;
  m.block(2, 0, 2, 2) = c;
  m.block(2, 2, 2, 2) = d;
  return m;
}

}  // namespace

DiracAlgebra dirac_algebra(Representation rep, int dim) {
  DiracAlgebra alg;
  alg.representation = rep;
  alg.dim = dim;
  if (dim == 1) {
    alg.alpha = {pauli(1)};
    alg.beta = pauli(3);
    alg.omega = pauli(3);
    return alg;
  }
  if (dim != 3) throw ConfigError("Dirac algebra is available for dim 1 and 3 only");

  const SpinMatrix zero = SpinMatrix::Zero(2, 2);
  const SpinMatrix id = pauli(0);
  for (int k = 1; k <= 3; ++k) {
    if (rep == Representation::weyl)
      alg.alpha.push_back(blocks(pauli(k), zero, zero, -pauli(k)));
    else
      alg.alpha.push_back(blocks(zero, pauli(k), pauli(k), zero));
  }
  alg.beta = rep == Representation::weyl ? blocks(zero, id, id, zero) : blocks(id, zero, zero, -id);
  alg.omega = -blocks(pauli(2), zero, zero, pauli(2));
  return alg;
}

SpinMatrix h_matrix(const Vec3& p, double m, const DiracAlgebra& alg) {
  SpinMatrix h = m * alg.beta;
  for (int k = 0; k < alg.dim; ++k) h += p[k] * alg.alpha[k];
  return h;
}

SpinMatrix energy_projector(const Vec3& p, double m, int eta, const DiracAlgebra& alg) {
  if (eta != 1 && eta != -1) throw ArgumentError("energy sign must be +1 or -1");
  const int nc = alg.components();
  return 0.5 * (SpinMatrix::Identity(nc, nc) + (eta / energy(p, m)) * h_matrix(p, m, alg));
}

}  // namespace dirac_front
