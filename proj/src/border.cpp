#include "dirac_front/border.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dirac_front/errors.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/mass.hpp"

namespace dirac_front {

double border(const SpinorField& psi, const Vec3& e, double delta) {
  const Vec3 u = unit_direction(psi.grid(), e);
  const auto w = psi.space() == Space::position ? psi.density() : psi.to_position().density();
  return carrier_quantile(psi.grid(), w, u, delta);
}

double light_speed_excess(const BorderTrace& trace, double slack) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const double jump = std::abs(trace.borders[i + 1] - trace.borders[i]);
    worst = std::max(worst, jump - std::abs(trace.times[i + 1] - trace.times[i]) - slack);
  }
  return worst;
}

BorderTrace BorderTable::trace(std::size_t direction) const {
  BorderTrace tr;
  tr.direction = directions.at(direction);
  tr.delta = delta;
  tr.grid = grid;
  tr.times = times;
  for (const auto& row : borders) tr.borders.push_back(row.at(direction));
  return tr;
}

std::size_t BorderTable::time_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] == t) return i;
  throw ArgumentError("time " + std::to_string(t) + " not sampled in the border table");
}

BorderTable sample_borders(const SpinorField& psi, const std::vector<Vec3>& directions,
                           const std::vector<double>& times, double delta, Dynamics dynamics,
                           int eta) {
  BorderTable table;
  table.grid = psi.grid();
  table.delta = delta;
  table.times = times;
  for (const auto& e : directions) table.directions.push_back(unit_direction(psi.grid(), e));
  const Propagator prop(psi);
  for (double t : times) {
    const SpinorField psi_t = dynamics == Dynamics::dirac ? prop.at(t) : prop.nw_at(t, eta);
    const auto w = psi_t.density();
    std::vector<double> row;
    for (const auto& e : table.directions) row.push_back(carrier_quantile(psi.grid(), w, e, delta));
    table.borders.push_back(std::move(row));
  }
  return table;
}

namespace {

void require_increasing(const std::vector<double>& times) {
  if (times.empty()) throw ArgumentError("no sample times");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i + 1] > times[i])) throw ArgumentError("sample times must be strictly increasing");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

BorderTrace border_trace(const SpinorField& psi, const Vec3& e, const std::vector<double>& times,
                         double delta) {
  require_increasing(times);
  require_horizon(psi.grid(), carrier_radius(psi, delta), max_abs(times));
  return sample_borders(psi, {e}, times, delta).trace(0);
}

namespace {

// Sum of squared residuals of the unit-slope tent with breakpoint te; the
// apex value has the closed form mean(b_i + |t_i - te|).
double tent_ss(const BorderTrace& tr, double te, double* apex_out = nullptr) {
  const std::size_t n = tr.size();
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) c += tr.borders[i] + std::abs(tr.times[i] - te);
  c /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = tr.borders[i] - (c - std::abs(tr.times[i] - te));
    ss += r * r;
  }
  if (apex_out) *apex_out = c;
  return ss;
}

// Golden-section minimum of tent_ss on [a, b]; tent_ss is a convex quadratic
// between consecutive sample times.
double golden_min(const BorderTrace& tr, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = tent_ss(tr, x1);
  double f2 = tent_ss(tr, x2);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = tent_ss(tr, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = tent_ss(tr, x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

TentFit fit_tent(const BorderTrace& tr, TentMode mode) {
  const std::size_t n = tr.size();
  if (n < 5 || tr.borders.size() != n) throw ArgumentError("tent fit needs at least 5 samples");
  require_increasing(tr.times);

  double best_te = tr.times[0];
  double best_ss = tent_ss(tr, best_te);
  auto consider = [&](double te) {
    const double ss = tent_ss(tr, te);
    if (ss < best_ss) {
      best_ss = ss;
      best_te = te;
    }
  };
  for (std::size_t k = 0; k < n; ++k) consider(tr.times[k]);
  for (std::size_t k = 0; k + 1 < n; ++k) consider(golden_min(tr, tr.times[k], tr.times[k + 1]));

  std::size_t before = 0;
  std::size_t after = 0;
  for (double t : tr.times) {
    if (t < best_te) ++before;
    if (t > best_te) ++after;
  }
  if (before < 2 || after < 2)
    throw ApexNotBracketedError("tent apex at t = " + std::to_string(best_te) +
                                " is not bracketed by the sampled window");

  TentFit fit;
  fit.t_e = best_te;
  tent_ss(tr, best_te, &fit.apex);
  fit.residual_rms = std::sqrt(best_ss / static_cast<double>(n));
  if (mode == TentMode::unit_slope) return fit;

  // b = apex + s_pre * min(t - t_e, 0) + s_post * max(t - t_e, 0)
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double d = tr.times[i] - fit.t_e;
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = std::min(d, 0.0);
    design(static_cast<Eigen::Index>(i), 2) = std::max(d, 0.0);
    rhs(static_cast<Eigen::Index>(i)) = tr.borders[i];
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  fit.free_slope = true;
  fit.apex = coef(0);
  fit.slope_pre = coef(1);
  fit.slope_post = coef(2);
  fit.residual_rms = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

int CheckReport::violations() const {
  return static_cast<int>(
      std::count_if(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.margin < 0.0; }));
}

double CheckReport::worst_margin() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) worst = std::min(worst, e.margin);
  return worst;
}

CheckReport check_causality(const BorderTable& table, double tol) {
  CheckReport rep{"causality", tol, "", {}};
  const std::size_t i0 = table.time_index(0.0);
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    const double t = table.times[i];
    for (std::size_t d = 0; d < table.directions.size(); ++d) {
      const double bound = table.borders[i0][d] - std::abs(t) - tol;
      const double value = table.borders[i][d];
      rep.entries.push_back({t, table.directions[d], value, bound, value - bound});
    }
  }
  return rep;
}

namespace {

std::vector<double> with_zero(std::vector<double> times) {
  if (std::find(times.begin(), times.end(), 0.0) == times.end()) times.push_back(0.0);
  std::sort(times.begin(), times.end());
  return times;
}

std::size_t direction_index(const BorderTable& table, const Vec3& e) {
  for (std::size_t d = 0; d < table.directions.size(); ++d)
    if (table.directions[d] == e) return d;
  throw ArgumentError("direction not present in the border table");
}

}  // namespace

CheckReport check_causality(const SpinorField& psi, const std::vector<double>& times, double delta,
                            double tol, const std::vector<Vec3>& directions) {
  const auto dirs = directions.empty() ? axis_directions(psi.grid()) : directions;
  return check_causality(sample_borders(psi, dirs, with_zero(times), delta), tol);
}

CheckReport check_upper_bound(const BorderTable& table, std::size_t direction, double tol,
                              const std::optional<TentFit>& tent) {
  CheckReport rep{"upper_bound", tol, "", {}};
  const Vec3 e = table.directions.at(direction);
  const std::size_t opposite = direction_index(table, -e);
  const std::size_t i0 = table.time_index(0.0);
  const double e0 = table.borders[i0][direction];
  const double ebar0 = table.borders[i0][opposite];
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    const double t = table.times[i];
    const double value = table.borders[i][direction];
    const double bound = -2.0 * ebar0 - e0 - std::abs(t) + tol;
    rep.entries.push_back({t, e, value, bound, bound - value});
    if (tent) {
      const double sharp = -ebar0 - std::abs(t - tent->t_e) + tol;
      rep.entries.push_back({t, e, value, sharp, sharp - value});
    }
  }
  if (tent) rep.note = "includes the tent-sharpened bound -ebar(psi) - |t - t_e|";
  return rep;
}

CheckReport check_upper_bound(const SpinorField& psi, const Vec3& e,
                              const std::vector<double>& times, double delta, double tol,
                              const std::optional<TentFit>& tent) {
  const Vec3 u = unit_direction(psi.grid(), e);
  const auto table = sample_borders(psi, {u, -u}, with_zero(times), delta);
  return check_upper_bound(table, 0, tol, tent);
}

CheckReport check_turning_budget(const TentFit& fit_e, const TentFit& fit_ebar, double width,
                                 double tol) {
  CheckReport rep{"turning_budget", tol, "", {}};
  const double value = std::abs(fit_e.t_e) + std::abs(fit_ebar.t_e);
  rep.entries.push_back({0.0, {0, 0, 0}, value, width + tol, width + tol - value});
  return rep;
}

CheckReport check_min_law(const SpinorField& psi, const Vec3& e, const std::vector<double>& times,
                          double delta, double tol) {
  CheckReport rep{"min_law", tol, "", {}};
  const Vec3 u = unit_direction(psi.grid(), e);
  std::vector<double> all{0.0};
  for (double t : times) {
    if (t == 0.0) continue;
    all.push_back(std::abs(t));
    all.push_back(-std::abs(t));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const auto table = sample_borders(psi, {u, -u}, all, delta);
  const std::size_t i0 = table.time_index(0.0);
  for (double t : times) {
    const double a = std::abs(t);
    for (std::size_t d = 0; d < 2; ++d) {
      const double lhs = std::min(table.borders[table.time_index(a)][d],
                                  table.borders[table.time_index(-a)][d]);
      const double rhs = table.borders[i0][d] - a;
      rep.entries.push_back({a, table.directions[d], lhs, rhs, tol - std::abs(lhs - rhs)});
    }
  }
  return rep;
}

CheckReport check_long_term(const SpinorField& psi, double radius, double delta, double tol,
                            const std::vector<Vec3>& directions, double span, int steps) {
  CheckReport rep{"long_term", tol, "", {}};
  const auto dirs = directions.empty() ? axis_directions(psi.grid()) : directions;
  const double t0 = 2.0 * radius;
  std::vector<double> times;
  for (double t : linspace(t0, t0 + span, steps)) {
    times.push_back(t);
    times.push_back(-t);
  }
  std::sort(times.begin(), times.end());
  const auto table = sample_borders(psi, dirs, times, delta);
  const std::size_t ip = table.time_index(t0);
  const std::size_t im = table.time_index(-t0);
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    const double t = table.times[i];
    for (std::size_t d = 0; d < table.directions.size(); ++d) {
      const double predicted = t > 0 ? table.borders[ip][d] + t0 - t : table.borders[im][d] + t0 + t;
      const double value = table.borders[i][d];
      rep.entries.push_back({t, table.directions[d], value, predicted, tol - std::abs(value - predicted)});
    }
  }
  return rep;
}

ShellReport shell_report(const SpinorField& psi, const std::vector<double>& times, double radius,
                         Dynamics dynamics, int eta) {
  ShellReport rep;
  rep.radius = radius;
  rep.dynamics = dynamics;
  const Propagator prop(psi);
  for (double t : times) {
    const SpinorField psi_t = dynamics == Dynamics::dirac ? prop.at(t) : prop.nw_at(t, eta);
    ShellRow row;
    row.t = t;
    row.inner = std::sqrt(shell_mass(psi_t, 0.0, radius));
    row.outer = std::sqrt(outside_ball_mass(psi_t, std::abs(t)));
    rep.rows.push_back(row);
  }
  return rep;
}

double fit_outer_decay_exponent(const ShellReport& report, double t_lo, double t_hi) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : report.rows) {
    const double a = std::abs(row.t);
    if (a < t_lo || a > t_hi || !(row.outer > 0.0)) continue;
    xs.push_back(std::log1p(a));
    ys.push_back(std::log(row.outer));
  }
  if (xs.size() < 2) throw ArgumentError("decay fit needs at least two positive samples in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

TurningTimes turning_times_from_table(const BorderTable& table, std::size_t e_index,
                                      std::size_t ebar_index) {
  return {fit_tent(table.trace(e_index)), fit_tent(table.trace(ebar_index))};
}

TurningTimes measure_turning_times(const SpinorField& psi, const Vec3& e,
                                   const std::vector<double>& times, double delta) {
  const Vec3 u = unit_direction(psi.grid(), e);
  return turning_times_from_table(sample_borders(psi, {u, -u}, times, delta), 0, 1);
}

std::vector<double> linspace(double t_min, double t_max, int steps) {
  if (steps < 1) throw ArgumentError("linspace needs at least one step");
  if (steps == 1) return {t_min};
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    double t = t_min + (t_max - t_min) * k / (steps - 1);
    if (std::abs(t) < 1e-13 * (std::abs(t_min) + std::abs(t_max))) t = 0.0;
    out[static_cast<std::size_t>(k)] = t;
  }
  return out;
}

}  // namespace dirac_front
