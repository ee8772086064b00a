#include "dirac_front/exponential_type.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dirac_front/errors.hpp"
#include "dirac_front/parallel.hpp"

namespace dirac_front {

ComplexPoint ComplexPoint::from(int dim, const Vec3& x, const Vec3& lambda, double r) {
  ComplexPoint p;
  p.dim = dim;
  for (int j = 0; j < dim; ++j) p.z[j] = cdouble(x[j], lambda[j] * r);
  return p;
}

cdouble ComplexPoint::square() const {
  cdouble s = 0.0;
  for (int j = 0; j < dim; ++j) s += z[j] * z[j];
  return s;
}

double ComplexPoint::norm2() const {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) s += std::norm(z[j]);
  return s;
}

namespace {

constexpr double kLargeImag = 20.0;

// 0.5 ln(cos^2 a +- ... ) with |cos(a+ib)|^2 = cos^2 a + sinh^2 b and
// |sin(a+ib)|^2 = sin^2 a + sinh^2 b; sign selects cos (+1) or sin (-1).
double log_abs_trig(cdouble w, double sign) {
  const double a = std::abs(w.real());
  const double b = std::abs(w.imag());
  if (b > kLargeImag) {
    const double e2 = std::exp(-2.0 * b);
    return b - std::numbers::ln2 + 0.5 * std::log1p(sign * 2.0 * std::cos(2.0 * a) * e2 + e2 * e2);
  }
  const double trig = sign > 0 ? std::cos(a) : std::sin(a);
  const double sh = std::sinh(b);
  const double v = trig * trig + sh * sh;
  if (v == 0.0) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log(v);
}

}  // namespace

double log_abs_cos(cdouble w) { return log_abs_trig(w, 1.0); }
double log_abs_sin(cdouble w) { return log_abs_trig(w, -1.0); }

double log_abs_sinc(cdouble w) {
  const cdouble w2 = w * w;
  if (std::abs(w2) < 1e-8) return std::log(std::abs(1.0 - w2 / 6.0 + w2 * w2 / 120.0));
  const cdouble root = std::sqrt(w2);
  return log_abs_sin(root) - std::log(std::abs(root));
}

namespace {

cdouble t_eps(double t, const ComplexPoint& z, double m) {
  return t * std::sqrt(z.square() + m * m);
}

}  // namespace

LogMagnitude entire_cos_log(double t, const ComplexPoint& z, double m) {
  return {log_abs_cos(t_eps(t, z, m))};
}

LogMagnitude entire_sinc_log(double t, const ComplexPoint& z, double m) {
  const cdouble w2 = t * t * (z.square() + m * m);
  if (std::abs(w2) < 1e-8) return {std::log(std::abs(1.0 - w2 / 6.0 + w2 * w2 / 120.0))};
  return {log_abs_sinc(std::sqrt(w2))};
}

EfsincConstants efsinc_constants(double t, double mu) {
  if (t == 0.0) throw ArgumentError("efsinc bounds need t != 0");
  if (!(mu >= 0.0)) throw ArgumentError("efsinc bounds need mu >= 0");
  const double at = std::abs(t);
  EfsincConstants c;
  c.cos_lower = 0.25 * std::exp(-at * mu);
  c.cos_upper = std::exp(at * mu);
  c.sinc_lower = std::sqrt(1.0 / 24.0) * std::exp(-at * mu) / at;
  c.sinc_upper = std::numbers::sqrt2 * std::exp(at * mu) / at;
  c.v_threshold = std::numbers::sqrt2 * mu + 0.5 * std::numbers::ln2 / at;
  return c;
}

int EfsincReport::cos_violations() const {
  return static_cast<int>(std::count_if(cos_rows.begin(), cos_rows.end(), [](const EfsincRow& r) {
    return !(r.log_lower <= r.log_value && r.log_value <= r.log_upper);
  }));
}

int EfsincReport::sinc_violations() const {
  return static_cast<int>(std::count_if(sinc_rows.begin(), sinc_rows.end(), [](const EfsincRow& r) {
    return !(r.log_lower <= r.log_value && r.log_value <= r.log_upper);
  }));
}

EfsincReport efsinc_check(double t, double mu, const std::vector<double>& u_values,
                          const std::vector<double>& v_values) {
  EfsincReport rep;
  rep.t = t;
  rep.mu = mu;
  rep.constants = efsinc_constants(t, mu);
  for (double v : v_values)
    if (!(std::abs(v) > rep.constants.v_threshold))
      throw ArgumentError("efsinc_check needs |v| > C_t = " + std::to_string(rep.constants.v_threshold));
  const std::size_t nu = u_values.size();
  const std::size_t n = nu * v_values.size();
  rep.cos_rows.resize(n);
  rep.sinc_rows.resize(n);
  const double ln_cl = std::log(rep.constants.cos_lower);
  const double ln_cu = std::log(rep.constants.cos_upper);
  const double ln_sl = std::log(rep.constants.sinc_lower);
  const double ln_su = std::log(rep.constants.sinc_upper);
  parallel_for(n, [&](std::size_t i) {
    const double u = u_values[i % nu];
    const double v = v_values[i / nu];
    const cdouble w = t * std::sqrt(mu * mu + cdouble(u, v) * cdouble(u, v));
    const double growth = std::abs(t * v);
    const double ln_abs_z = std::log(std::hypot(u, v));
    rep.cos_rows[i] = {u, v, ln_cl + growth, log_abs_cos(w), ln_cu + growth};
    rep.sinc_rows[i] = {u, v, ln_sl - ln_abs_z + growth, log_abs_sinc(w), ln_su - ln_abs_z + growth};
  });
  return rep;
}

namespace {

struct LogSum {
  double shift = 0.0;
  cdouble sum = 0.0;  // true value = sum * e^{shift}
};

LogSum fourier_laplace_sum(const SpinorField& psi, const ComplexPoint& z, int component) {
  const SpinorField pos = psi.to_position();
  if (component < 0 || component >= pos.components()) throw ArgumentError("component out of range");
  const GridSpec& grid = pos.grid();
  const auto vals = pos.component(component);
  const std::size_t n = pos.voxels();
  auto exponent = [&](std::size_t i) {
    const Vec3 q = grid.position(i);
    cdouble s = 0.0;
    for (int j = 0; j < grid.dim; ++j) s += q[j] * z.z[j];
    return cdouble(0.0, -1.0) * s;
  };
  constexpr std::size_t block = 4096;
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<double> block_max(nblocks, -std::numeric_limits<double>::infinity());
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * block);
    for (std::size_t i = b * block; i < end; ++i)
      if (vals[i] != 0.0) block_max[b] = std::max(block_max[b], exponent(i).real());
  });
  LogSum out;
  out.shift = *std::max_element(block_max.begin(), block_max.end());
  if (!std::isfinite(out.shift)) return {0.0, 0.0};
  std::vector<cdouble> partial(nblocks, 0.0);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * block);
    cdouble s = 0.0;
    for (std::size_t i = b * block; i < end; ++i)
      if (vals[i] != 0.0) s += vals[i] * std::exp(exponent(i) - out.shift);
    partial[b] = s;
  });
  for (const auto& s : partial) out.sum += s;
  out.sum *= grid.cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim);
  return out;
}

}  // namespace

cdouble fourier_laplace(const SpinorField& psi, const ComplexPoint& z, int component) {
  const LogSum s = fourier_laplace_sum(psi, z, component);
  return s.sum * std::exp(s.shift);
}

LogMagnitude fourier_laplace_log(const SpinorField& psi, const ComplexPoint& z, int component) {
  const LogSum s = fourier_laplace_sum(psi, z, component);
  if (s.sum == 0.0) return {-std::numeric_limits<double>::infinity()};
  return {s.shift + std::log(std::abs(s.sum))};
}

IndicatorEstimate p_indicator_estimate(const LogEvaluator& f, int dim, const Vec3& lambda,
                                       const Vec3& x, const std::vector<double>& r_schedule,
                                       double log_power) {
  if (r_schedule.empty()) throw ArgumentError("empty r schedule");
  for (std::size_t i = 0; i < r_schedule.size(); ++i) {
    if (!(r_schedule[i] > 0.0)) throw ArgumentError("r schedule must be positive");
    if (i > 0 && !(r_schedule[i] > r_schedule[i - 1]))
      throw ArgumentError("r schedule must be strictly increasing");
  }
  const double lam = norm(lambda);
  IndicatorEstimate est;
  for (double r : r_schedule) {
    double v = f(ComplexPoint::from(dim, x, lambda, r)).value;
    if (log_power != 0.0 && lam > 0.0) v += log_power * std::log(lam * r);
    est.rows.push_back({r, v / r});
  }
  est.last = est.rows.back().estimate;
  est.extrapolated = est.last;
  if (est.rows.size() >= 2) {
    const auto& a = est.rows[est.rows.size() - 2];
    const auto& b = est.rows.back();
    est.extrapolated = (b.r * b.estimate - a.r * a.estimate) / (b.r - a.r);
  }
  est.correction = est.extrapolated - est.last;
  return est;
}

double support_function(const SpinorField& psi, const Vec3& lambda, double delta) {
  const double lam = norm(lambda);
  if (lam == 0.0) {
    if (!(psi.squared_norm() > 0.0)) throw UndefinedStateError("support function of the zero field");
    return 0.0;
  }
  return -lam * border(psi, -lambda, delta);
}

}  // namespace dirac_front
