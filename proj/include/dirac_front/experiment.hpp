#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dirac_front/algebra.hpp"
#include "dirac_front/errors.hpp"
#include "dirac_front/grid.hpp"
#include "json.hpp"

namespace dirac_front {

/// Every problem found while validating a config document.
class ConfigValidationError : public ConfigError {
 public:
  explicit ConfigValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct StateRecipe {
  std::string kind = "bump";  // bump | nise | dsabtp | slab_cut | momentum_bump
  Vec3 center{0, 0, 0};
  double radius = 0.5;
  std::optional<std::vector<cdouble>> spinor;  // unset: random weights from the seed
  Vec3 direction{1, 0, 0};
  // nise: explicit (tau, delta_shift) or prescribed turning times (t1, t2)
  double tau = 0.0;
  std::optional<double> delta_shift;
  std::optional<double> t1;
  std::optional<double> t2;
  // turning times of the seed bump; unset: measured
  std::optional<double> base_t_e;
  std::optional<double> base_t_ebar;
  // dsabtp, and the slab_cut source
  double a = -1.0;
  double b = 1.0;
  // slab_cut: [alpha1, alpha2], or a far-face slab of the given thickness
  std::string source = "dsabtp";  // dsabtp | bump
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<double> thickness;
  // momentum_bump
  Vec3 p_center{1.5, 0, 0};
  double p_radius = 0.5;
};

struct TimeSampling {
  double t_min = -1.0;
  double t_max = 1.0;
  int steps = 41;

  double step() const { return steps > 1 ? (t_max - t_min) / (steps - 1) : 0.0; }
  double t_abs_max() const;
};

struct Tolerances {
  std::optional<double> single;    // default 2 dx
  std::optional<double> compound;  // default 3 dx
  double slope = 0.05;             // free-slope deviation from 1
  std::optional<double> time;      // default 2 * time step
};

/// Experiment-specific knobs; only the ones relevant to the chosen experiment are used.
struct ExperimentParams {
  // shell / asymptotic_causality
  double shell_radius = 0.5;
  double fit_t_min = 2.0;
  double fit_t_max = 10.0;
  double inner_limit = 0.1;
  double exponent_limit = -2.0;
  int eta = 1;
  double leak_time = 0.5;
  double nw_min_leak = 1e-3;
  double dirac_max_leak = 1e-5;
  // long_term
  std::optional<double> long_term_radius;
  double span = 1.0;
  int long_term_steps = 11;
  // efsinc
  std::vector<double> t_values{1.0};
  std::vector<double> mu_values{1.0};
  double u_min = -50.0;
  double u_max = 50.0;
  int u_count = 200;
  double v_max = 50.0;
  int v_count = 200;
  // indicator / pp_consistency
  std::vector<Vec3> lambdas{{0, 0, 1}};
  Vec3 x{0, 0, 0};
  std::vector<double> r_schedule{1e2, 1e3, 1e4};
  double relative_tolerance = 0.01;
  std::optional<int> component;
  // gpteb_search
  std::vector<double> thicknesses{0.1, 0.2, 0.3};
  // open_problem_search
  int samples = 8;
};

struct ExperimentConfig {
  std::string experiment;
  GridSpec grid;
  double mass = 1.0;
  Representation representation = Representation::weyl;
  StateRecipe state;
  TimeSampling time;
  double delta = 1e-6;
  Tolerances tolerances;
  Vec3 direction{1, 0, 0};
  std::vector<Vec3> directions;  // empty: axis directions
  std::uint64_t seed = 1;
  std::string output = "out";
  ExperimentParams params;
  nlohmann::json raw;

  double single_tol() const { return tolerances.single.value_or(2.0 * grid.dx()); }
  double compound_tol() const { return tolerances.compound.value_or(3.0 * grid.dx()); }
  double time_tol() const { return tolerances.time.value_or(2.0 * time.step()); }
};

/// Typed config or ConfigValidationError listing every violation.
ExperimentConfig validate_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Upper bound on the carrier radius of the recipe's state, from its parameters alone.
double nominal_carrier_radius(const ExperimentConfig& cfg);
/// Largest |t| the experiment evolves to.
double experiment_horizon_time(const ExperimentConfig& cfg);

struct CheckSummary {
  std::string name;
  bool passed = true;
  bool skipped = false;
  int violations = 0;
  double worst_margin = 0.0;
  std::string note;
};

struct RunResult {
  nlohmann::json manifest;
  std::vector<CheckSummary> checks;
  std::vector<std::string> outputs;  // relative to the output directory

  bool all_passed() const;
};

/// Runs the experiment, writing CSV/JSON outputs and manifest.json into out_dir.
RunResult run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string anchor;
};

const std::vector<ExperimentInfo>& list_experiments();

std::string tool_version();

/// "%.17g" formatting used for every CSV float.
std::string format_double(double x);

}  // namespace dirac_front
