#pragma once

#include <cstdint>
#include <optional>

#include "dirac_front/algebra.hpp"
#include "dirac_front/border.hpp"
#include "dirac_front/grid.hpp"
#include "dirac_front/spinor_field.hpp"

namespace dirac_front {

/// Unit spinor with Gaussian-distributed real and imaginary parts (mt19937_64).
Spinor random_spinor(int components, std::uint64_t seed);

/// f(r) = exp(-1 / (1 - r^2)) for r < 1, else 0.
double bump_profile(double r);

/// psi(x) = f(|x - center| / rho) u, normalized.
/// rho <= 2 dx: ResolutionError. |center| + rho >= L / 2: ConfigError. u = 0: ArgumentError.
SpinorField bump_state(const GridSpec& grid, const Vec3& center, double rho, const Spinor& u,
                       double m, Representation rep = Representation::weyl);

struct MomentumBump {
  SpinorField field;
  double v = 0.0;         // min |p| / eps(p) over the momentum support
  bool v_zero = false;    // support contains p = 0
};

/// F psi(p) = f(|p - p_center| / p_radius) u, normalized, returned in position space.
/// p_radius <= 2 dp: ResolutionError.
MomentumBump momentum_bump_state(const GridSpec& grid, const Vec3& p_center, double p_radius,
                                 const Spinor& u, double m,
                                 Representation rep = Representation::weyl);

/// True when every component of b is an integer multiple of dx (relative tolerance 1e-9).
bool is_lattice_vector(const GridSpec& grid, const Vec3& b);

/// (W(b) psi)(x) = psi(x - b) as a circular shift; b must be a lattice vector
/// (ArgumentError otherwise). Returned in position space.
SpinorField translate(const SpinorField& psi, const Vec3& b);

/// T psi = omega conj(psi) in position space. Non-Weyl representation: ConfigError.
SpinorField time_reverse(const SpinorField& psi);

/// Turning times of a base state in directions e and -e.
struct BaseTurning {
  double t_e = 0.0;
  double t_ebar = 0.0;
};

struct NiseState {
  SpinorField field;
  double tau = 0.0;
  double delta_shift = 0.0;
  double predicted_t_e = 0.0;
  double predicted_t_ebar = 0.0;
};

/// psi = psi1 + W(delta_shift e) psi1_tau, normalized, with the predicted
/// turning times t_e = t_e1 and t_ebar = t_ebar1 - tau.
/// |tau| > delta_shift or delta_shift < 0: ArgumentError.
NiseState nise_state(const SpinorField& psi1, const Vec3& e, double tau, double delta_shift,
                     const BaseTurning& base = {});

/// nise_state tuned to the prescribed (t1, t2) = (t_e, t_ebar), followed by a
/// time translation. With no delta_shift the smallest lattice multiple >= |tau| is used.
NiseState trembling_state(const SpinorField& psi1, const Vec3& e, double t1, double t2,
                          const BaseTurning& base = {},
                          std::optional<double> delta_shift = std::nullopt);

/// Tent fits of psi in e and -e over a symmetric window +-window with `steps` samples.
BaseTurning measure_base_turning(const SpinorField& psi, const Vec3& e, double window, int steps,
                                 double delta = kDefaultDelta);

struct DsabtpState {
  SpinorField field;
  double rho = 0.0;        // half-width of the intermediate slab state
  double tau = 0.0;        // predicted t_e = t_ebar
  BaseTurning base;        // measured turning times of the seed bump
  double delta_shift = 0.0;
};

/// State localized in {a <= x.e <= b} with t_e = t_ebar = tau.
/// A seed bump of radius rho = (b - a)/2 - |tau| centered at (a + b)/2 e is made
/// symmetric (t_e = t_ebar = 0) by nise_state and a time translation, then evolved by -tau.
/// a >= b or |tau| >= (b - a)/2: ArgumentError.
DsabtpState dsabtp_state(const GridSpec& grid, const Vec3& e, double a, double b, double tau,
                         double m, std::uint64_t seed,
                         Representation rep = Representation::weyl,
                         std::optional<BaseTurning> base = std::nullopt);

struct SlabCut {
  SpinorField field;             // normalized
  double kept_fraction = 0.0;    // relative mass inside the slab
};

/// 1_{alpha1 <= x.e <= alpha2} psi in position space (voxel centers).
/// alpha1 >= alpha2: ArgumentError. Nothing kept: EmptyCutError.
SlabCut slab_cut(const SpinorField& psi, const Vec3& e, double alpha1, double alpha2);

}  // namespace dirac_front
