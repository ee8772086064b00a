#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac_front/grid.hpp"
#include "dirac_front/spinor_field.hpp"

namespace dirac_front {

inline constexpr double kDefaultDelta = 1e-6;

/// e_delta(psi): sup{alpha : half_space_mass(psi, e, alpha) <= delta}.
double border(const SpinorField& psi, const Vec3& e, double delta = kDefaultDelta);

/// Sampled t -> e_delta(psi_t) in one direction.
struct BorderTrace {
  Vec3 direction{1, 0, 0};
  double delta = kDefaultDelta;
  GridSpec grid;
  std::vector<double> times;
  std::vector<double> borders;

  std::size_t size() const { return times.size(); }
};

/// Largest amount by which |b_{i+1} - b_i| exceeds |t_{i+1} - t_i| + slack
/// (non-positive when the speed-of-light bound holds).
double light_speed_excess(const BorderTrace& trace, double slack);

/// Borders of psi_t for every (time, direction) pair; each psi_t is evolved once.
struct BorderTable {
  GridSpec grid;
  double delta = kDefaultDelta;
  std::vector<double> times;
  std::vector<Vec3> directions;
  std::vector<std::vector<double>> borders;  // [time][direction]

  BorderTrace trace(std::size_t direction) const;
  /// Index of t in `times` (exact match); throws ArgumentError otherwise.
  std::size_t time_index(double t) const;
};

enum class Dynamics { dirac, newton_wigner };

/// Evolves psi once per time with the given dynamics; no horizon validation.
BorderTable sample_borders(const SpinorField& psi, const std::vector<Vec3>& directions,
                           const std::vector<double>& times, double delta = kDefaultDelta,
                           Dynamics dynamics = Dynamics::dirac, int eta = 1);

/// Border trace with horizon validation: extent >= 2 (R0 + T_max) + 4 dx where R0 is
/// the delta-carrier radius of psi. Times must be strictly increasing.
BorderTrace border_trace(const SpinorField& psi, const Vec3& e, const std::vector<double>& times,
                         double delta = kDefaultDelta);

struct TentFit {
  double t_e = 0.0;
  double apex = 0.0;
  double slope_pre = 1.0;
  double slope_post = -1.0;
  double residual_rms = 0.0;
  bool free_slope = false;
};

enum class TentMode { unit_slope, free_slope };

/// Least-squares fit of b(t) = apex - |t - t_e|. In free-slope mode t_e is taken
/// from the unit-slope fit and (apex, slope_pre, slope_post) are refitted.
/// Fewer than 5 samples: ArgumentError. Fewer than 2 samples on either side of
/// the fitted apex: ApexNotBracketedError.
TentFit fit_tent(const BorderTrace& trace, TentMode mode = TentMode::unit_slope);

struct CheckEntry {
  double t = 0.0;
  Vec3 direction{0, 0, 0};
  double value = 0.0;  // measured quantity
  double bound = 0.0;  // what it is compared with
  double margin = 0.0;  // >= 0 means satisfied
};

/// Structured result of a property check; violations are entries with margin < 0.
struct CheckReport {
  std::string name;
  double tolerance = 0.0;
  std::string note;
  std::vector<CheckEntry> entries;

  int violations() const;
  double worst_margin() const;
  bool passed() const { return violations() == 0; }
};

/// border(psi_t, e) >= border(psi, e) - |t| - tol for every sampled t and direction.
CheckReport check_causality(const BorderTable& table, double tol);
CheckReport check_causality(const SpinorField& psi, const std::vector<double>& times, double delta,
                            double tol, const std::vector<Vec3>& directions = {});

/// e(psi_t) <= -2 ebar(psi) - e(psi) - |t| + tol; with a tent fit also
/// e(psi_t) <= -ebar(psi) - |t - t_e| + tol. The table must contain t = 0 and both e and -e.
CheckReport check_upper_bound(const BorderTable& table, std::size_t direction, double tol,
                              const std::optional<TentFit>& tent = std::nullopt);
CheckReport check_upper_bound(const SpinorField& psi, const Vec3& e,
                              const std::vector<double>& times, double delta, double tol,
                              const std::optional<TentFit>& tent = std::nullopt);

/// |t_e| + |t_ebar| <= width + tol.
CheckReport check_turning_budget(const TentFit& fit_e, const TentFit& fit_ebar, double width,
                                 double tol);

/// |min(e(psi_t), e(psi_-t)) - (e(psi) - |t|)| <= tol, checked for e and -e.
CheckReport check_min_law(const SpinorField& psi, const Vec3& e, const std::vector<double>& times,
                          double delta, double tol);

/// For t in [2R, 2R + span]: |e(psi_t) - (e(psi_2R) + 2R - t)| <= tol, and the mirror
/// statement for t <= -2R, over the given directions (default: axes).
CheckReport check_long_term(const SpinorField& psi, double radius, double delta, double tol,
                            const std::vector<Vec3>& directions = {}, double span = 1.0,
                            int steps = 11);

struct ShellRow {
  double t = 0.0;
  double inner = 0.0;  // ||1_{B_r} psi_t|| / ||psi||
  double outer = 0.0;  // ||1_{|x| > |t|} psi_t|| / ||psi||
};

struct ShellReport {
  double radius = 0.0;
  Dynamics dynamics = Dynamics::dirac;
  std::vector<ShellRow> rows;
};

ShellReport shell_report(const SpinorField& psi, const std::vector<double>& times, double radius,
                         Dynamics dynamics = Dynamics::dirac, int eta = 1);

/// Least-squares slope of ln(outer) against ln(1 + |t|) over rows with t_lo <= |t| <= t_hi.
double fit_outer_decay_exponent(const ShellReport& report, double t_lo, double t_hi);

/// Tent fits in e and -e for one state.
struct TurningTimes {
  TentFit e;
  TentFit ebar;
};
TurningTimes measure_turning_times(const SpinorField& psi, const Vec3& e,
                                   const std::vector<double>& times, double delta = kDefaultDelta);
TurningTimes turning_times_from_table(const BorderTable& table, std::size_t e_index,
                                      std::size_t ebar_index);

/// Evenly spaced samples t_min + k (t_max - t_min) / (steps - 1).
std::vector<double> linspace(double t_min, double t_max, int steps);

}  // namespace dirac_front
