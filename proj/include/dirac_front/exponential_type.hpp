#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "dirac_front/algebra.hpp"
#include "dirac_front/border.hpp"
#include "dirac_front/spinor_field.hpp"

namespace dirac_front {

/// z = x + i lambda r in C^d (d = 1 or 3; unused coordinates are zero).
struct ComplexPoint {
  int dim = 3;
  std::array<cdouble, 3> z{};

  static ComplexPoint from(int dim, const Vec3& x, const Vec3& lambda, double r);
  /// z_1^2 + ... + z_d^2 (no conjugation).
  cdouble square() const;
  /// |z|^2 = sum |z_j|^2.
  double norm2() const;
};

/// Natural log of a magnitude; -inf for an exact zero.
struct LogMagnitude {
  double value = 0.0;
};

/// ln|cos(w)| and ln|sin(w)| for complex w without overflow.
double log_abs_cos(cdouble w);
double log_abs_sin(cdouble w);
/// ln|sinc(w)|, sinc(0) = 1; depends on w only through w^2.
double log_abs_sinc(cdouble w);

/// ln|cos(t eps(z))| and ln|sinc(t eps(z))| with eps(z)^2 = z^2 + m^2.
LogMagnitude entire_cos_log(double t, const ComplexPoint& z, double m);
LogMagnitude entire_sinc_log(double t, const ComplexPoint& z, double m);

/// Constants of the explicit bounds on cos(t sqrt(mu^2 + w^2)) and sinc(...).
struct EfsincConstants {
  double cos_lower = 0.0;   // A_t = e^{-|t| mu} / 4
  double cos_upper = 0.0;   // B_t = e^{|t| mu}
  double sinc_lower = 0.0;  // A_t = (1/24)^{1/2} e^{-|t| mu} / |t|
  double sinc_upper = 0.0;  // B_t = sqrt(2) e^{|t| mu} / |t|
  double v_threshold = 0.0; // C_t = sqrt(2) mu + ln 2 / (2 |t|)
};
EfsincConstants efsinc_constants(double t, double mu);

struct EfsincRow {
  double u = 0.0;
  double v = 0.0;
  double log_lower = 0.0;
  double log_value = 0.0;
  double log_upper = 0.0;
};

struct EfsincReport {
  double t = 0.0;
  double mu = 0.0;
  EfsincConstants constants;
  std::vector<EfsincRow> cos_rows;
  std::vector<EfsincRow> sinc_rows;

  int cos_violations() const;
  int sinc_violations() const;
  int violations() const { return cos_violations() + sinc_violations(); }
};

/// Evaluates both sandwiches on the (u, v) product grid in log domain.
/// t = 0 or some |v| <= C_t: ArgumentError.
EfsincReport efsinc_check(double t, double mu, const std::vector<double>& u_values,
                          const std::vector<double>& v_values);

/// Fourier-Laplace transform (2 pi)^{-d/2} sum e^{-i q.z} psi_l(q) dx^d over
/// voxels where psi_l is nonzero. Position space is used (transformed if needed).
cdouble fourier_laplace(const SpinorField& psi, const ComplexPoint& z, int component);
/// ln|fourier_laplace| evaluated with a max-shift, so large Im z does not overflow.
LogMagnitude fourier_laplace_log(const SpinorField& psi, const ComplexPoint& z, int component);

using LogEvaluator = std::function<LogMagnitude(const ComplexPoint&)>;

struct IndicatorRow {
  double r = 0.0;
  double estimate = 0.0;  // (ln|f(x + i lambda r)| + log_power ln(|lambda| r)) / r
};

struct IndicatorEstimate {
  std::vector<IndicatorRow> rows;
  double last = 0.0;          // estimate at the largest r
  double extrapolated = 0.0;  // (r2 v2 - r1 v1) / (r2 - r1) from the last two rows
  double correction = 0.0;    // extrapolated - last
};

/// Finite-r estimate of limsup (1/r) ln|f(x + i lambda r)|. log_power adds
/// log_power * ln(|lambda| r) to ln|f| (1 for sinc, whose growth carries |z|^{-1}).
/// r_schedule must be strictly increasing and positive (ArgumentError otherwise).
IndicatorEstimate p_indicator_estimate(const LogEvaluator& f, int dim, const Vec3& lambda,
                                       const Vec3& x, const std::vector<double>& r_schedule,
                                       double log_power = 0.0);

/// H(lambda) over the delta-carrier: |lambda| (-border(psi, -lambda/|lambda|, delta)); 0 at lambda = 0.
double support_function(const SpinorField& psi, const Vec3& lambda, double delta = kDefaultDelta);

}  // namespace dirac_front
