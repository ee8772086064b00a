#pragma once

#include <utility>
#include <vector>

#include "dirac_front/algebra.hpp"
#include "dirac_front/spinor_field.hpp"

namespace dirac_front {

/// sin(w)/w with sinc(0) = 1; a Taylor branch covers |w| < 1e-4.
double sinc(double w);

/// e^{i t h(p)} = cos(t eps) I + i t sinc(t eps) h(p).
SpinMatrix mode_exponential(const Vec3& p, double t, double m, const DiracAlgebra& alg);

/// Per-mode factors cos(t eps(p)) and t sinc(t eps(p)) on a momentum lattice.
class EvolutionPlan {
 public:
  EvolutionPlan(const GridSpec& grid, double mass, double t);

  const GridSpec& grid() const { return grid_; }
  double mass() const { return mass_; }
  double time() const { return t_; }
  const std::vector<double>& cos_factors() const { return cos_; }
  const std::vector<double>& sinc_factors() const { return tsinc_; }

  /// Applies e^{i t h(p)} mode by mode to a momentum-space field.
  SpinorField apply(const SpinorField& phi) const;

 private:
  GridSpec grid_;
  double mass_;
  double t_;
  std::vector<double> cos_;
  std::vector<double> tsinc_;
};

/// psi_t = F^{-1} e^{i t h} F psi, returned in the space of the input.
SpinorField evolve(const SpinorField& psi, double t);

/// (psi_t + psi_{-t}, psi_t - psi_{-t}) from 2 cos(t eps) and 2 i t sinc(t eps) h.
std::pair<SpinorField, SpinorField> evolve_symmetric_pair(const SpinorField& psi, double t);

/// Every component multiplied by e^{i t eta eps(p)} in momentum space.
SpinorField evolve_nw(const SpinorField& psi, double t, int eta);

/// pi^eta applied mode by mode in momentum space; returned in the input's space.
SpinorField project_energy(const SpinorField& psi, int eta);

/// Repeated evolution of one state: the momentum transform is computed once.
class Propagator {
 public:
  explicit Propagator(const SpinorField& psi);
  /// Position-space psi_t.
  SpinorField at(double t) const;
  SpinorField nw_at(double t, int eta) const;
  const SpinorField& momentum() const { return phi_; }

 private:
  SpinorField phi_;
};

}  // namespace dirac_front
