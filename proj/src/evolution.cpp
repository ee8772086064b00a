#include "dirac_front/evolution.hpp"

#include <array>
#include <cmath>

#include "dirac_front/errors.hpp"
#include "dirac_front/parallel.hpp"

namespace dirac_front {

double sinc(double w) {
  if (std::abs(w) < 1e-4) {
    const double w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

SpinMatrix mode_exponential(const Vec3& p, double t, double m, const DiracAlgebra& alg) {
  const double eps = energy(p, m);
  const int nc = alg.components();
  return std::cos(t * eps) * SpinMatrix::Identity(nc, nc) +
         cdouble(0.0, t * sinc(t * eps)) * h_matrix(p, m, alg);
}

namespace {

// Dense copy of alpha_k, beta for the per-voxel kernels.
struct FlatAlgebra {
  int nc = 0;
  int dim = 0;
  std::array<std::array<cdouble, 16>, 3> alpha{};
  std::array<cdouble, 16> beta{};

  explicit FlatAlgebra(const DiracAlgebra& alg) : nc(alg.components()), dim(alg.dim) {
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) {
        beta[i * nc + j] = alg.beta(i, j);
        for (int k = 0; k < dim; ++k) alpha[k][i * nc + j] = alg.alpha[k](i, j);
      }
  }

  std::array<cdouble, 16> h(const Vec3& p, double m) const {
    std::array<cdouble, 16> out{};
    for (int ij = 0; ij < nc * nc; ++ij) {
      cdouble s = m * beta[ij];
      for (int k = 0; k < dim; ++k) s += p[k] * alpha[k][ij];
      out[ij] = s;
    }
    return out;
  }
};

template <class Kernel>
SpinorField map_modes(const SpinorField& phi, Kernel&& kernel) {
  if (phi.space() != Space::momentum) throw ArgumentError("expected a momentum-space field");
  SpinorField out = phi;
  const std::size_t v = phi.voxels();
  const int nc = phi.components();
  const auto in = phi.values();
  auto dst = out.values();
  parallel_for(v, [&](std::size_t idx) {
    std::array<cdouble, 4> x{};
    std::array<cdouble, 4> y{};
    for (int c = 0; c < nc; ++c) x[c] = in[c * v + idx];
    kernel(idx, x, y);
    for (int c = 0; c < nc; ++c) dst[c * v + idx] = y[c];
  });
  return out;
}

}  // namespace

EvolutionPlan::EvolutionPlan(const GridSpec& grid, double mass, double t)
    : grid_(grid), mass_(mass), t_(t) {
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  const std::size_t v = grid.voxel_count();
  cos_.resize(v);
  tsinc_.resize(v);
  parallel_for(v, [&](std::size_t idx) {
    const double eps = energy(grid_.momentum_vector(idx), mass_);
    cos_[idx] = std::cos(t_ * eps);
    tsinc_[idx] = t_ * sinc(t_ * eps);
  });
}

SpinorField EvolutionPlan::apply(const SpinorField& phi) const {
  if (!(phi.grid() == grid_)) throw ArgumentError("plan and field grids differ");
  const FlatAlgebra alg(phi.algebra());
  const int nc = alg.nc;
  return map_modes(phi, [&](std::size_t idx, const auto& x, auto& y) {
    const auto h = alg.h(grid_.momentum_vector(idx), mass_);
    const cdouble is(0.0, tsinc_[idx]);
    for (int i = 0; i < nc; ++i) {
      cdouble hx = 0.0;
      for (int j = 0; j < nc; ++j) hx += h[i * nc + j] * x[j];
      y[i] = cos_[idx] * x[i] + is * hx;
    }
  });
}

SpinorField evolve(const SpinorField& psi, double t) {
  const EvolutionPlan plan(psi.grid(), psi.mass(), t);
  const SpinorField out = plan.apply(psi.to_momentum());
  return psi.space() == Space::position ? out.to_position() : out;
}

std::pair<SpinorField, SpinorField> evolve_symmetric_pair(const SpinorField& psi, double t) {
  const SpinorField phi = psi.to_momentum();
  const GridSpec& grid = psi.grid();
  const FlatAlgebra alg(psi.algebra());
  const int nc = alg.nc;
  const double m = psi.mass();
  SpinorField sum = map_modes(phi, [&](std::size_t idx, const auto& x, auto& y) {
    const double c = 2.0 * std::cos(t * energy(grid.momentum_vector(idx), m));
    for (int i = 0; i < nc; ++i) y[i] = c * x[i];
  });
  SpinorField diff = map_modes(phi, [&](std::size_t idx, const auto& x, auto& y) {
    const Vec3 p = grid.momentum_vector(idx);
    const auto h = alg.h(p, m);
    const cdouble f(0.0, 2.0 * t * sinc(t * energy(p, m)));
    for (int i = 0; i < nc; ++i) {
      cdouble hx = 0.0;
      for (int j = 0; j < nc; ++j) hx += h[i * nc + j] * x[j];
      y[i] = f * hx;
    }
  });
  if (psi.space() == Space::position) return {sum.to_position(), diff.to_position()};
  return {std::move(sum), std::move(diff)};
}

SpinorField evolve_nw(const SpinorField& psi, double t, int eta) {
  if (eta != 1 && eta != -1) throw ArgumentError("energy sign must be +1 or -1");
  const SpinorField phi = psi.to_momentum();
  const GridSpec& grid = psi.grid();
  const int nc = psi.components();
  const double m = psi.mass();
  SpinorField out = map_modes(phi, [&](std::size_t idx, const auto& x, auto& y) {
    const double ph = t * eta * energy(grid.momentum_vector(idx), m);
    const cdouble f(std::cos(ph), std::sin(ph));
    for (int i = 0; i < nc; ++i) y[i] = f * x[i];
  });
  return psi.space() == Space::position ? out.to_position() : out;
}

SpinorField project_energy(const SpinorField& psi, int eta) {
  if (eta != 1 && eta != -1) throw ArgumentError("energy sign must be +1 or -1");
  const SpinorField phi = psi.to_momentum();
  const GridSpec& grid = psi.grid();
  const FlatAlgebra alg(psi.algebra());
  const int nc = alg.nc;
  const double m = psi.mass();
  SpinorField out = map_modes(phi, [&](std::size_t idx, const auto& x, auto& y) {
    const Vec3 p = grid.momentum_vector(idx);
    const auto h = alg.h(p, m);
    const double f = eta / energy(p, m);
    for (int i = 0; i < nc; ++i) {
      cdouble hx = 0.0;
      for (int j = 0; j < nc; ++j) hx += h[i * nc + j] * x[j];
      y[i] = 0.5 * (x[i] + f * hx);
    }
  });
  return psi.space() == Space::position ? out.to_position() : out;
}

Propagator::Propagator(const SpinorField& psi) : phi_(psi.to_momentum()) {}

SpinorField Propagator::at(double t) const {
  return EvolutionPlan(phi_.grid(), phi_.mass(), t).apply(phi_).to_position();
}

SpinorField Propagator::nw_at(double t, int eta) const {
  return evolve_nw(phi_, t, eta).to_position();
}

}  // namespace dirac_front
