#include "dirac_front/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "dirac_front/border.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/exponential_type.hpp"
#include "dirac_front/mass.hpp"
#include "dirac_front/parallel.hpp"
#include "dirac_front/states.hpp"

namespace dirac_front {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join_lines(const std::vector<std::string>& problems) {
  std::string s = "invalid experiment config:";
  for (const auto& p : problems) s += "\n  - " + p;
  return s;
}

}  // namespace

ConfigValidationError::ConfigValidationError(std::vector<std::string> problems)
    : ConfigError(join_lines(problems)), problems_(std::move(problems)) {}

std::string tool_version() { return "0.1.0"; }

namespace {

std::string short_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double TimeSampling::t_abs_max() const { return std::max(std::abs(t_min), std::abs(t_max)); }

bool RunResult::all_passed() const {
  for (const auto& c : checks)
    if (!c.skipped && !c.passed) return false;
  return true;
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> table = {
      {"tent", "border trace t -> e(psi_t) and its unit-slope tent fit", "tent law of border motion"},
      {"trembling", "direction-dependent turning times of a combined state (prescribed t1, t2)",
       "turning times in e and -e differ"},
      {"min_law", "min(e(psi_t), e(psi_-t)) = e(psi) - |t| in e and -e", "symmetric minimum formula"},
      {"upper_bound", "causality lower bound, upper bound and turning-time budget over a direction set",
       "region of influence and border upper bound"},
      {"long_term", "linear recession of every border for |t| >= 2R", "long-term isotropic expansion"},
      {"shell", "inner-ball mass decay and outer-shell tail decay of a momentum bump",
       "shell concentration of position probability"},
      {"asymptotic_causality", "light-cone leakage of Dirac versus Newton-Wigner evolution",
       "asymptotic causality of Newton-Wigner evolution"},
      {"efsinc", "explicit cos/sinc growth sandwich on a (u, v) grid", "explicit bounds for cos and sinc"},
      {"indicator", "P-indicator of cos(t eps) and sinc(t eps) from a geometric r schedule",
       "indicator of cos and sinc equals |t||lambda|"},
      {"pp_consistency", "P-indicator of the Fourier-Laplace transform versus the support function",
       "indicator equals the support function of the carrier"},
      {"gpteb_search", "far-face slab cuts of a symmetric-turning state: s t_ebar versus half the width",
       "turning time of at least half the width"},
      {"open_problem_search", "seeded sweep reporting the largest |t_ebar| / (width / 2) found",
       "open question on turning times beyond half the width"},
  };
  return table;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

struct Parser {
  std::vector<std::string>& problems;

  void unknown_keys(const json& obj, const std::string& where, const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!known.count(it.key())) problems.push_back(where + ": unknown key '" + it.key() + "'");
  }

  template <class T>
  T get(const json& obj, const std::string& key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) {
        problems.push_back(where + "." + key + ": expected a string");
        return fallback;
      }
      return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        problems.push_back(where + "." + key + ": expected an integer");
        return fallback;
      }
      return v.get<T>();
    } else {
      if (!v.is_number()) {
        problems.push_back(where + "." + key + ": expected a number");
        return fallback;
      }
      return v.get<T>();
    }
  }

  template <class T>
  std::optional<T> opt(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    const std::size_t before = problems.size();
    T v = get<T>(obj, key, where, T{});
    if (problems.size() != before) return std::nullopt;
    return v;
  }

  Vec3 vec(const json& v, const std::string& where, Vec3 fallback) {
    if (!v.is_array() || v.empty() || v.size() > 3) {
      problems.push_back(where + ": expected an array of 1 to 3 numbers");
      return fallback;
    }
    Vec3 out{0, 0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        problems.push_back(where + ": expected numbers");
        return fallback;
      }
      out[i] = v[i].get<double>();
    }
    return out;
  }

  Vec3 vec(const json& obj, const std::string& key, const std::string& where, Vec3 fallback) {
    if (!obj.contains(key)) return fallback;
    return vec(obj.at(key), where + "." + key, fallback);
  }

  std::vector<double> numbers(const json& obj, const std::string& key, const std::string& where,
                              std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
      problems.push_back(where + "." + key + ": expected a non-empty array of numbers");
      return fallback;
    }
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) {
        problems.push_back(where + "." + key + ": expected numbers");
        return fallback;
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<Vec3> vectors(const json& obj, const std::string& key, const std::string& where,
                            std::vector<Vec3> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_string() && v.get<std::string>() == "axes") return {};
    if (!v.is_array() || v.empty()) {
      problems.push_back(where + "." + key + ": expected \"axes\" or a non-empty array of vectors");
      return fallback;
    }
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(vec(v[i], where + "." + key + "[" + std::to_string(i) + "]", {1, 0, 0}));
    return out;
  }
};

const std::set<std::string> kKinds{"bump", "nise", "dsabtp", "slab_cut", "momentum_bump"};

StateRecipe parse_state(Parser& p, const json& s) {
  StateRecipe r;
  if (!s.is_object()) {
    p.problems.push_back("state: expected an object");
    return r;
  }
  p.unknown_keys(s, "state",
                 {"kind", "center", "radius", "spinor", "direction", "tau", "delta_shift", "t1", "t2",
                  "base_t_e", "base_t_ebar", "a", "b", "source", "alpha1", "alpha2", "thickness",
                  "p_center", "p_radius"});
  r.kind = p.get<std::string>(s, "kind", "state", r.kind);
  if (!kKinds.count(r.kind)) p.problems.push_back("state.kind: unknown state kind '" + r.kind + "'");
  r.center = p.vec(s, "center", "state", r.center);
  r.radius = p.get<double>(s, "radius", "state", r.radius);
  if (s.contains("spinor") && !(s["spinor"].is_string() && s["spinor"] == "random")) {
    const json& sp = s["spinor"];
    std::vector<cdouble> w;
    bool ok = sp.is_array() && !sp.empty();
    if (ok) {
      for (const auto& c : sp) {
        if (c.is_number()) {
          w.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
          w.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
          ok = false;
        }
      }
    }
    if (ok) r.spinor = w;
    else p.problems.push_back("state.spinor: expected \"random\" or an array of numbers / [re, im] pairs");
  }
  r.direction = p.vec(s, "direction", "state", r.direction);
  r.tau = p.get<double>(s, "tau", "state", r.tau);
  r.delta_shift = p.opt<double>(s, "delta_shift", "state");
  r.t1 = p.opt<double>(s, "t1", "state");
  r.t2 = p.opt<double>(s, "t2", "state");
  r.base_t_e = p.opt<double>(s, "base_t_e", "state");
  r.base_t_ebar = p.opt<double>(s, "base_t_ebar", "state");
  r.a = p.get<double>(s, "a", "state", r.a);
  r.b = p.get<double>(s, "b", "state", r.b);
  r.source = p.get<std::string>(s, "source", "state", r.source);
  r.alpha1 = p.opt<double>(s, "alpha1", "state");
  r.alpha2 = p.opt<double>(s, "alpha2", "state");
  r.thickness = p.opt<double>(s, "thickness", "state");
  r.p_center = p.vec(s, "p_center", "state", r.p_center);
  r.p_radius = p.get<double>(s, "p_radius", "state", r.p_radius);
  return r;
}

ExperimentParams parse_params(Parser& p, const json& j) {
  ExperimentParams q;
  if (!j.is_object()) {
    p.problems.push_back("params: expected an object");
    return q;
  }
  p.unknown_keys(j, "params",
                 {"shell_radius", "fit_t_min", "fit_t_max", "inner_limit", "exponent_limit", "eta",
                  "leak_time", "nw_min_leak", "dirac_max_leak", "long_term_radius", "span",
                  "long_term_steps", "t_values", "mu_values", "u_min", "u_max", "u_count", "v_max",
                  "v_count", "lambdas", "x", "r_schedule", "relative_tolerance", "component",
                  "thicknesses", "samples"});
  const std::string w = "params";
  q.shell_radius = p.get<double>(j, "shell_radius", w, q.shell_radius);
  q.fit_t_min = p.get<double>(j, "fit_t_min", w, q.fit_t_min);
  q.fit_t_max = p.get<double>(j, "fit_t_max", w, q.fit_t_max);
  q.inner_limit = p.get<double>(j, "inner_limit", w, q.inner_limit);
  q.exponent_limit = p.get<double>(j, "exponent_limit", w, q.exponent_limit);
  q.eta = p.get<int>(j, "eta", w, q.eta);
  q.leak_time = p.get<double>(j, "leak_time", w, q.leak_time);
  q.nw_min_leak = p.get<double>(j, "nw_min_leak", w, q.nw_min_leak);
  q.dirac_max_leak = p.get<double>(j, "dirac_max_leak", w, q.dirac_max_leak);
  q.long_term_radius = p.opt<double>(j, "long_term_radius", w);
  q.span = p.get<double>(j, "span", w, q.span);
  q.long_term_steps = p.get<int>(j, "long_term_steps", w, q.long_term_steps);
  q.t_values = p.numbers(j, "t_values", w, q.t_values);
  q.mu_values = p.numbers(j, "mu_values", w, q.mu_values);
  q.u_min = p.get<double>(j, "u_min", w, q.u_min);
  q.u_max = p.get<double>(j, "u_max", w, q.u_max);
  q.u_count = p.get<int>(j, "u_count", w, q.u_count);
  q.v_max = p.get<double>(j, "v_max", w, q.v_max);
  q.v_count = p.get<int>(j, "v_count", w, q.v_count);
  q.lambdas = p.vectors(j, "lambdas", w, q.lambdas);
  q.x = p.vec(j, "x", w, q.x);
  q.r_schedule = p.numbers(j, "r_schedule", w, q.r_schedule);
  q.relative_tolerance = p.get<double>(j, "relative_tolerance", w, q.relative_tolerance);
  q.component = p.opt<int>(j, "component", w);
  q.thicknesses = p.numbers(j, "thicknesses", w, q.thicknesses);
  q.samples = p.get<int>(j, "samples", w, q.samples);
  if (q.eta != 1 && q.eta != -1) p.problems.push_back("params.eta: must be +1 or -1");
  if (q.u_count < 1 || q.v_count < 1) p.problems.push_back("params: u_count and v_count must be >= 1");
  if (!(q.fit_t_min < q.fit_t_max)) p.problems.push_back("params: fit_t_min must be < fit_t_max");
  if (q.samples < 1) p.problems.push_back("params.samples: must be >= 1");
  for (std::size_t i = 1; i < q.r_schedule.size(); ++i)
    if (!(q.r_schedule[i] > q.r_schedule[i - 1]) || !(q.r_schedule[0] > 0))
      p.problems.push_back("params.r_schedule: must be positive and strictly increasing");
  return q;
}

bool needs_evolution(const std::string& experiment) {
  return experiment != "efsinc" && experiment != "indicator" && experiment != "pp_consistency";
}

int state_components(const GridSpec& g) { return g.dim == 3 ? 4 : 2; }

double lattice_round_up(const GridSpec& g, double x) {
  return std::max(0.0, std::ceil(x / g.dx() - 1e-9)) * g.dx();
}

}  // namespace

double nominal_carrier_radius(const ExperimentConfig& cfg) {
  const StateRecipe& s = cfg.state;
  const double bump = norm(s.center) + s.radius;
  const std::string kind = s.kind == "slab_cut" ? s.source : s.kind;
  if (kind == "momentum_bump") return 0.0;
  if (kind == "dsabtp") return std::max(std::abs(s.a), std::abs(s.b));
  if (kind == "nise") {
    const double be = s.base_t_e.value_or(0.0);
    const double bb = s.base_t_ebar.value_or(0.0);
    double tau = s.tau;
    double shift_time = 0.0;
    if (s.t1 && s.t2) {
      tau = (bb - be) - (*s.t2 - *s.t1);
      shift_time = std::abs(be - *s.t1);
    }
    const double ds = s.delta_shift.value_or(lattice_round_up(cfg.grid, std::abs(tau)));
    return bump + std::abs(tau) + ds + shift_time;
  }
  return bump;
}

double experiment_horizon_time(const ExperimentConfig& cfg) {
  if (!needs_evolution(cfg.experiment)) return 0.0;
  double t = cfg.time.t_abs_max();
  if (cfg.experiment == "long_term") {
    const double r = cfg.params.long_term_radius.value_or(nominal_carrier_radius(cfg));
    t = std::max(t, 2.0 * r + cfg.params.span);
  }
  if (cfg.experiment == "asymptotic_causality") t = std::max(t, std::abs(cfg.params.leak_time));
  return t;
}

ExperimentConfig validate_config(const json& doc) {
  std::vector<std::string> problems;
  Parser p{problems};
  ExperimentConfig cfg;
  cfg.raw = doc;
  if (!doc.is_object()) throw ConfigValidationError({"config: expected a JSON object"});
  p.unknown_keys(doc, "config",
                 {"experiment", "grid", "mass", "representation", "state", "time", "delta",
                  "tolerances", "direction", "directions", "seed", "output", "params"});

  cfg.experiment = p.get<std::string>(doc, "experiment", "config", "");
  if (cfg.experiment.empty()) {
    problems.push_back("experiment: missing");
  } else {
    bool known = false;
    for (const auto& e : list_experiments()) known = known || e.name == cfg.experiment;
    if (!known) problems.push_back("experiment: unknown experiment '" + cfg.experiment + "'");
  }

  bool grid_ok = false;
  if (!doc.contains("grid") || !doc["grid"].is_object()) {
    problems.push_back("grid: missing or not an object");
  } else {
    const json& g = doc["grid"];
    p.unknown_keys(g, "grid", {"dim", "n", "extent"});
    const int dim = p.get<int>(g, "dim", "grid", 3);
    const int n = p.get<int>(g, "n", "grid", 64);
    const double extent = p.get<double>(g, "extent", "grid", 8.0);
    try {
      cfg.grid = make_grid(dim, n, extent);
      grid_ok = true;
    } catch (const ConfigError& e) {
      problems.push_back(std::string("grid: ") + e.what());
    }
  }

  cfg.mass = p.get<double>(doc, "mass", "config", cfg.mass);
  if (!(cfg.mass > 0.0)) problems.push_back("mass: must be > 0");
  const std::string rep = p.get<std::string>(doc, "representation", "config", "weyl");
  try {
    cfg.representation = representation_from_string(rep);
  } catch (const ConfigError& e) {
    problems.push_back(std::string("representation: ") + e.what());
  }

  if (doc.contains("state")) cfg.state = parse_state(p, doc["state"]);

  if (doc.contains("time")) {
    const json& t = doc["time"];
    if (!t.is_object()) {
      problems.push_back("time: expected an object");
    } else {
      p.unknown_keys(t, "time", {"t_min", "t_max", "steps"});
      cfg.time.t_min = p.get<double>(t, "t_min", "time", cfg.time.t_min);
      cfg.time.t_max = p.get<double>(t, "t_max", "time", cfg.time.t_max);
      cfg.time.steps = p.get<int>(t, "steps", "time", cfg.time.steps);
    }
  }
  if (cfg.time.steps < 1) problems.push_back("time.steps: must be >= 1");
  if (!(cfg.time.t_min <= cfg.time.t_max)) problems.push_back("time: t_min must be <= t_max");

  cfg.delta = p.get<double>(doc, "delta", "config", cfg.delta);
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) problems.push_back("delta: must lie in (0, 1)");

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) {
      problems.push_back("tolerances: expected an object");
    } else {
      p.unknown_keys(t, "tolerances", {"single", "compound", "slope", "time"});
      cfg.tolerances.single = p.opt<double>(t, "single", "tolerances");
      cfg.tolerances.compound = p.opt<double>(t, "compound", "tolerances");
      cfg.tolerances.slope = p.get<double>(t, "slope", "tolerances", cfg.tolerances.slope);
      cfg.tolerances.time = p.opt<double>(t, "time", "tolerances");
    }
  }

  cfg.direction = p.vec(doc, "direction", "config", cfg.direction);
  cfg.directions = p.vectors(doc, "directions", "config", {});
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) problems.push_back("seed: expected a non-negative integer");
    else cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.output = p.get<std::string>(doc, "output", "config", cfg.output);
  if (doc.contains("params")) cfg.params = parse_params(p, doc["params"]);
  if (!doc.contains("params") || !doc["params"].contains("relative_tolerance"))
    if (cfg.experiment == "pp_consistency") cfg.params.relative_tolerance = 0.05;

  if (grid_ok) {
    const GridSpec& g = cfg.grid;
    auto check_dir = [&](const Vec3& e, const std::string& where) {
      try {
        (void)unit_direction(g, e);
      } catch (const ArgumentError& err) {
        problems.push_back(where + ": " + err.what());
      }
    };
    check_dir(cfg.direction, "direction");
    check_dir(cfg.state.direction, "state.direction");
    for (const auto& e : cfg.directions) check_dir(e, "directions");
    if (cfg.experiment == "pp_consistency" || cfg.experiment == "indicator")
      for (const auto& l : cfg.params.lambdas) check_dir(l, "params.lambdas");

    const StateRecipe& s = cfg.state;
    const std::string base_kind = s.kind == "slab_cut" ? s.source : s.kind;
    if (s.kind == "slab_cut" && s.source != "dsabtp" && s.source != "bump")
      problems.push_back("state.source: must be 'dsabtp' or 'bump'");
    if (base_kind == "bump" || base_kind == "nise") {
      if (!(s.radius > 2.0 * g.dx()))
        problems.push_back("state.radius: " + format_double(s.radius) + " must exceed 2 dx = " +
                           format_double(2.0 * g.dx()));
      if (!(norm(s.center) + s.radius < 0.5 * g.extent))
        problems.push_back("state: bump carrier does not fit inside the grid");
    }
    if (base_kind == "nise") {
      if (s.t1.has_value() != s.t2.has_value()) problems.push_back("state: t1 and t2 go together");
      if (!s.t1 && s.delta_shift && std::abs(s.tau) > *s.delta_shift)
        problems.push_back("state: nise requires |tau| <= delta_shift");
      if (s.delta_shift && !is_lattice_vector(g, {*s.delta_shift, 0, 0}))
        problems.push_back("state.delta_shift: must be a multiple of dx = " + format_double(g.dx()));
    }
    if (base_kind == "dsabtp") {
      if (!(s.a < s.b)) problems.push_back("state: dsabtp requires a < b");
      else if (!(std::abs(s.tau) < 0.5 * (s.b - s.a)))
        problems.push_back("state: dsabtp requires |tau| < (b - a)/2");
      else if (!(0.5 * (s.b - s.a) - std::abs(s.tau) > 2.0 * g.dx()))
        problems.push_back("state: dsabtp slab half-width (b - a)/2 - |tau| must exceed 2 dx");
    }
    if (s.kind == "slab_cut") {
      if (s.alpha1.has_value() != s.alpha2.has_value())
        problems.push_back("state: alpha1 and alpha2 go together");
      if (s.alpha1 && s.alpha2 && !(*s.alpha1 < *s.alpha2))
        problems.push_back("state: slab_cut requires alpha1 < alpha2");
      if (!s.alpha1 && !s.thickness && cfg.experiment != "gpteb_search")
        problems.push_back("state: slab_cut needs alpha1/alpha2 or thickness");
    }
    if (base_kind == "momentum_bump" && !(s.p_radius > 2.0 * g.dp()))
      problems.push_back("state.p_radius: must exceed 2 dp = " + format_double(2.0 * g.dp()));
    if (cfg.experiment == "tent" || cfg.experiment == "trembling" || cfg.experiment == "gpteb_search" ||
        cfg.experiment == "open_problem_search" || cfg.experiment == "upper_bound")
      if (cfg.time.steps < 5) problems.push_back("time.steps: tent fits need at least 5 samples");
    if (cfg.experiment == "shell" && base_kind != "momentum_bump")
      problems.push_back("state.kind: the shell experiment uses a momentum_bump state");
    if (cfg.experiment == "gpteb_search" && s.kind != "dsabtp" && s.kind != "slab_cut")
      problems.push_back("state.kind: gpteb_search cuts a dsabtp state");

    if (needs_evolution(cfg.experiment)) {
      const double r0 = nominal_carrier_radius(cfg);
      const double tmax = experiment_horizon_time(cfg);
      if (!horizon_ok(g, r0, tmax))
        problems.push_back("horizon violation: extent " + format_double(g.extent) +
                           " < 2 (R0 + T_max) + 4 dx with R0 = " + format_double(r0) +
                           ", T_max = " + format_double(tmax));
      const bool measures_base = (base_kind == "nise" && !(s.base_t_e && s.base_t_ebar)) ||
                                 (base_kind == "dsabtp" && !(s.base_t_e && s.base_t_ebar));
      if (measures_base) {
        const double rho = base_kind == "dsabtp" ? 0.5 * (s.b - s.a) - std::abs(s.tau) : s.radius;
        const double c = base_kind == "dsabtp" ? std::abs(0.5 * (s.a + s.b)) : norm(s.center);
        if (!horizon_ok(g, c + rho, 2.5 * rho))
          problems.push_back("horizon violation: measuring the seed turning times needs extent >= " +
                             format_double(2.0 * (c + 3.5 * rho) + 4.0 * g.dx()));
      }
    }
  }

  if (!problems.empty()) throw ConfigValidationError(std::move(problems));
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigValidationError({std::string("malformed JSON: ") + e.what()});
  }
  return validate_config(doc);
}

// ---------------------------------------------------------------------------
// running

namespace {

json vec_json(const GridSpec& g, const Vec3& v) {
  json a = json::array();
  for (int i = 0; i < g.dim; ++i) a.push_back(v[i]);
  return a;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void row(const std::vector<double>& values) {
    std::vector<std::string> r;
    for (double v : values) r.push_back(format_double(v));
    rows.push_back(std::move(r));
  }
};

struct BuiltState {
  explicit BuiltState(SpinorField f) : field(std::move(f)) {}

  SpinorField field;
  json meta = json::object();
  double nominal_radius = 0.0;
  std::optional<double> predicted_t_e;
  std::optional<double> predicted_t_ebar;
};

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  RunResult& result() { return result_; }
  json& meta() { return meta_; }
  const ExperimentConfig& cfg() const { return cfg_; }

  void write_csv(const std::string& rel, const Csv& csv) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    for (std::size_t i = 0; i < csv.header.size(); ++i) out << (i ? "," : "") << csv.header[i];
    out << "\n";
    for (const auto& r : csv.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    }
    if (!out) throw std::runtime_error("failed writing " + p.string());
    result_.outputs.push_back(rel);
  }

  void write_json(const std::string& rel, const json& j) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + p.string());
    result_.outputs.push_back(rel);
  }

  void add(const std::string& name, const CheckReport& rep) {
    CheckSummary s;
    s.name = name;
    s.violations = rep.violations();
    s.passed = s.violations == 0;
    s.worst_margin = rep.entries.empty() ? 0.0 : rep.worst_margin();
    s.note = rep.note;
    result_.checks.push_back(s);
  }

  void add(const std::string& name, double margin, const std::string& note = "") {
    CheckSummary s;
    s.name = name;
    s.passed = margin >= 0.0;
    s.violations = s.passed ? 0 : 1;
    s.worst_margin = margin;
    s.note = note;
    result_.checks.push_back(s);
  }

  void skip(const std::string& name, const std::string& note) {
    CheckSummary s;
    s.name = name;
    s.skipped = true;
    s.note = note;
    result_.checks.push_back(s);
  }

  std::vector<double> times() const {
    return linspace(cfg_.time.t_min, cfg_.time.t_max, cfg_.time.steps);
  }

  Vec3 direction() const { return unit_direction(cfg_.grid, cfg_.direction); }

  std::vector<Vec3> direction_set() const {
    if (cfg_.directions.empty()) return axis_directions(cfg_.grid);
    std::vector<Vec3> out;
    for (const auto& e : cfg_.directions) out.push_back(unit_direction(cfg_.grid, e));
    return out;
  }

  Spinor weights(std::uint64_t seed) const {
    const int nc = state_components(cfg_.grid);
    if (!cfg_.state.spinor) return random_spinor(nc, seed);
    const auto& w = *cfg_.state.spinor;
    if (static_cast<int>(w.size()) != nc)
      throw ConfigError("state.spinor needs " + std::to_string(nc) + " components");
    Spinor u(nc);
    for (int c = 0; c < nc; ++c) u(c) = w[static_cast<std::size_t>(c)];
    return u;
  }

  BuiltState build_state(const StateRecipe& s, std::uint64_t seed) const {
    const GridSpec& g = cfg_.grid;
    const double m = cfg_.mass;
    const auto rep = cfg_.representation;
    const Vec3 e = unit_direction(g, s.direction);
    if (s.kind == "bump") {
      BuiltState b{bump_state(g, s.center, s.radius, weights(seed), m, rep)};
      b.nominal_radius = norm(s.center) + s.radius;
      return b;
    }
    if (s.kind == "momentum_bump") {
      auto mb = momentum_bump_state(g, s.p_center, s.p_radius, weights(seed), m, rep);
      BuiltState b{mb.field};
      b.meta["v"] = mb.v;
      b.meta["v_zero"] = mb.v_zero;
      return b;
    }
    if (s.kind == "nise") {
      const SpinorField psi1 = bump_state(g, s.center, s.radius, weights(seed), m, rep);
      BaseTurning base;
      if (s.base_t_e && s.base_t_ebar) {
        base = {*s.base_t_e, *s.base_t_ebar};
      } else {
        base = measure_base_turning(psi1, e, 2.5 * s.radius, 41, cfg_.delta);
      }
      NiseState ns = s.t1 ? trembling_state(psi1, e, *s.t1, *s.t2, base, s.delta_shift)
                          : nise_state(psi1, e, s.tau,
                                       s.delta_shift.value_or(lattice_round_up(g, std::abs(s.tau))),
                                       base);
      BuiltState b{ns.field};
      b.meta["base_t_e"] = base.t_e;
      b.meta["base_t_ebar"] = base.t_ebar;
      b.meta["tau"] = ns.tau;
      b.meta["delta_shift"] = ns.delta_shift;
      b.meta["predicted_t_e"] = ns.predicted_t_e;
      b.meta["predicted_t_ebar"] = ns.predicted_t_ebar;
      b.predicted_t_e = ns.predicted_t_e;
      b.predicted_t_ebar = ns.predicted_t_ebar;
      return b;
    }
    if (s.kind == "dsabtp") {
      std::optional<BaseTurning> base;
      if (s.base_t_e && s.base_t_ebar) base = BaseTurning{*s.base_t_e, *s.base_t_ebar};
      auto ds = dsabtp_state(g, e, s.a, s.b, s.tau, m, seed, rep, base);
      BuiltState b{ds.field};
      b.meta["rho"] = ds.rho;
      b.meta["tau"] = ds.tau;
      b.meta["base_t_e"] = ds.base.t_e;
      b.meta["base_t_ebar"] = ds.base.t_ebar;
      b.meta["delta_shift"] = ds.delta_shift;
      b.meta["predicted_t_e"] = ds.tau;
      b.meta["predicted_t_ebar"] = ds.tau;
      b.predicted_t_e = ds.tau;
      b.predicted_t_ebar = ds.tau;
      return b;
    }
    // slab_cut
    StateRecipe src = s;
    src.kind = s.source;
    BuiltState source = build_state(src, seed);
    double a1 = 0.0, a2 = 0.0;
    if (s.alpha1) {
      a1 = *s.alpha1;
      a2 = *s.alpha2;
    } else {
      const double far = -border(source.field, -e, cfg_.delta);
      a2 = far;
      a1 = far - s.thickness.value_or(0.1);
    }
    auto cut = slab_cut(source.field, e, a1, a2);
    BuiltState b{cut.field};
    b.meta = source.meta;
    b.meta["alpha1"] = a1;
    b.meta["alpha2"] = a2;
    b.meta["kept_fraction"] = cut.kept_fraction;
    return b;
  }

  BuiltState build() const {
    BuiltState b = build_state(cfg_.state, cfg_.seed);
    b.nominal_radius = nominal_carrier_radius(cfg_);
    return b;
  }

  // Runtime horizon check with the measured delta-carrier radius.
  void require_runtime_horizon(const SpinorField& psi, double t_max) const {
    if (cfg_.state.kind == "momentum_bump") {
      require_horizon(cfg_.grid, 0.0, t_max);
      return;
    }
    require_horizon(cfg_.grid, carrier_radius(psi, cfg_.delta), t_max);
  }

  void trace_rows(Csv& csv, const BorderTable& table) const {
    csv.header = {"t", "border", "e_x", "e_y", "e_z"};
    for (std::size_t d = 0; d < table.directions.size(); ++d)
      for (std::size_t i = 0; i < table.times.size(); ++i) {
        const Vec3& e = table.directions[d];
        csv.row({table.times[i], table.borders[i][d], e[0], e[1], e[2]});
      }
  }

  json tent_json(const BorderTrace& tr, const TentFit& unit, const std::optional<TentFit>& free) const {
    json j;
    j["direction"] = vec_json(cfg_.grid, tr.direction);
    j["t_e"] = unit.t_e;
    j["apex"] = unit.apex;
    j["residual"] = unit.residual_rms;
    j["dx"] = cfg_.grid.dx();
    j["time_step"] = cfg_.time.step();
    if (free) {
      j["free_slope"] = {{"apex", free->apex},
                         {"slope_pre", free->slope_pre},
                         {"slope_post", free->slope_post},
                         {"residual", free->residual_rms}};
    }
    return j;
  }

 private:
  const ExperimentConfig& cfg_;
  fs::path dir_;
  RunResult result_;
  json meta_ = json::object();
};

std::vector<double> with_zero_sorted(std::vector<double> t) {
  if (std::find(t.begin(), t.end(), 0.0) == t.end()) t.push_back(0.0);
  std::sort(t.begin(), t.end());
  return t;
}

void run_tent(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  const auto times = r.times();
  r.require_runtime_horizon(st.field, cfg.time.t_abs_max());
  const Vec3 e = r.direction();
  const BorderTable table = sample_borders(st.field, {e}, times, cfg.delta);
  const BorderTrace tr = table.trace(0);
  Csv csv;
  r.trace_rows(csv, table);
  r.write_csv("trace.csv", csv);
  r.add("lipschitz", -light_speed_excess(tr, 2.0 * cfg.grid.dx()), "|db| <= |dt| + 2 dx between samples");
  try {
    const TentFit unit = fit_tent(tr);
    const TentFit free = fit_tent(tr, TentMode::free_slope);
    r.write_json("tent.json", r.tent_json(tr, unit, free));
    r.add("tent_residual", cfg.single_tol() - unit.residual_rms);
    const double dev = std::max(std::abs(free.slope_pre - 1.0), std::abs(free.slope_post + 1.0));
    r.add("free_slope", cfg.tolerances.slope - dev, "largest |slope| deviation from 1");
  } catch (const ApexNotBracketedError& err) {
    r.add("tent_residual", -1.0, err.what());
  }
}

void run_trembling(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  const auto times = r.times();
  r.require_runtime_horizon(st.field, cfg.time.t_abs_max());
  const Vec3 e = r.direction();
  const BorderTable table = sample_borders(st.field, {e, -e}, times, cfg.delta);
  std::optional<TentFit> fits[2];
  const char* names[2] = {"e", "ebar"};
  for (int k = 0; k < 2; ++k) {
    const BorderTrace tr = table.trace(static_cast<std::size_t>(k));
    BorderTable one = table;
    one.directions = {table.directions[static_cast<std::size_t>(k)]};
    for (auto& row : one.borders) row = {row[static_cast<std::size_t>(k)]};
    Csv csv;
    r.trace_rows(csv, one);
    r.write_csv(std::string(names[k]) + "/trace.csv", csv);
    try {
      fits[k] = fit_tent(tr);
      r.write_json(std::string(names[k]) + "/tent.json",
                   r.tent_json(tr, *fits[k], fit_tent(tr, TentMode::free_slope)));
    } catch (const ApexNotBracketedError& err) {
      r.add(std::string("tent_") + names[k], -1.0, err.what());
    }
  }
  const double width = -border(st.field, -e, cfg.delta) - border(st.field, e, cfg.delta);
  r.meta()["width"] = width;
  if (fits[0] && st.predicted_t_e)
    r.add("t_e_matches_prediction", cfg.time_tol() - std::abs(fits[0]->t_e - *st.predicted_t_e));
  if (fits[1] && st.predicted_t_ebar)
    r.add("t_ebar_matches_prediction", cfg.time_tol() - std::abs(fits[1]->t_e - *st.predicted_t_ebar));
  if (fits[0] && fits[1]) {
    r.add("turning_budget", check_turning_budget(*fits[0], *fits[1], width, cfg.compound_tol()));
    r.meta()["measured_t_e"] = fits[0]->t_e;
    r.meta()["measured_t_ebar"] = fits[1]->t_e;
  }
}

void run_min_law(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  r.require_runtime_horizon(st.field, cfg.time.t_abs_max());
  std::vector<double> ts;
  for (double t : r.times())
    if (t != 0.0 && std::find(ts.begin(), ts.end(), std::abs(t)) == ts.end()) ts.push_back(std::abs(t));
  std::sort(ts.begin(), ts.end());
  if (ts.empty()) ts.push_back(0.0);
  const CheckReport rep = check_min_law(st.field, r.direction(), ts, cfg.delta, cfg.compound_tol());
  Csv csv;
  csv.header = {"t", "min_border", "predicted", "margin", "e_x", "e_y", "e_z"};
  for (const auto& en : rep.entries)
    csv.row({en.t, en.value, en.bound, en.margin, en.direction[0], en.direction[1], en.direction[2]});
  r.write_csv("min_law.csv", csv);
  r.add("min_law", rep);
}

void run_upper_bound(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  r.require_runtime_horizon(st.field, cfg.time.t_abs_max());
  std::vector<Vec3> dirs = r.direction_set();
  const std::size_t given = dirs.size();
  for (std::size_t i = 0; i < given; ++i)
    if (std::find(dirs.begin(), dirs.end(), -dirs[i]) == dirs.end()) dirs.push_back(-dirs[i]);
  const auto times = with_zero_sorted(r.times());
  const BorderTable table = sample_borders(st.field, dirs, times, cfg.delta);
  Csv csv;
  r.trace_rows(csv, table);
  r.write_csv("trace.csv", csv);
  r.add("causality", check_causality(table, cfg.single_tol()));

  std::vector<std::optional<TentFit>> fits(dirs.size());
  json tents = json::array();
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    try {
      const BorderTrace tr = table.trace(d);
      fits[d] = fit_tent(tr);
      tents.push_back(r.tent_json(tr, *fits[d], std::nullopt));
    } catch (const ApexNotBracketedError&) {
    }
  }
  r.write_json("tent.json", tents);
  CheckReport upper{"upper_bound", cfg.compound_tol(), "", {}};
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const CheckReport one = check_upper_bound(table, d, cfg.compound_tol(), fits[d]);
    upper.entries.insert(upper.entries.end(), one.entries.begin(), one.entries.end());
  }
  r.add("upper_bound", upper);
  CheckReport budget{"turning_budget", cfg.compound_tol(), "", {}};
  const std::size_t i0 = table.time_index(0.0);
  for (std::size_t d = 0; d < given; ++d) {
    const auto opp = static_cast<std::size_t>(
        std::find(dirs.begin(), dirs.end(), -dirs[d]) - dirs.begin());
    if (!fits[d] || !fits[opp]) continue;
    const double width = -table.borders[i0][opp] - table.borders[i0][d];
    const CheckReport one = check_turning_budget(*fits[d], *fits[opp], width, cfg.compound_tol());
    budget.entries.insert(budget.entries.end(), one.entries.begin(), one.entries.end());
  }
  r.add("turning_budget", budget);
}

void run_long_term(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  const double radius = cfg.params.long_term_radius.value_or(st.nominal_radius);
  r.meta()["radius"] = radius;
  r.require_runtime_horizon(st.field, 2.0 * radius + cfg.params.span);
  const CheckReport rep = check_long_term(st.field, radius, cfg.delta, cfg.compound_tol(),
                                          r.direction_set(), cfg.params.span, cfg.params.long_term_steps);
  Csv csv;
  csv.header = {"t", "border", "predicted", "margin", "e_x", "e_y", "e_z"};
  for (const auto& en : rep.entries)
    csv.row({en.t, en.value, en.bound, en.margin, en.direction[0], en.direction[1], en.direction[2]});
  r.write_csv("trace.csv", csv);
  r.add("long_term", rep);
}

Csv shell_csv(const ShellReport& rep) {
  Csv csv;
  csv.header = {"t", "inner_mass", "outer_mass"};
  for (const auto& row : rep.rows) csv.row({row.t, row.inner, row.outer});
  return csv;
}

void run_shell(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  r.require_runtime_horizon(st.field, cfg.time.t_abs_max());
  const ShellReport rep = shell_report(st.field, r.times(), cfg.params.shell_radius);
  r.write_csv("shell.csv", shell_csv(rep));
  double t_far = 0.0;
  double inner_far = 0.0;
  for (const auto& row : rep.rows)
    if (std::abs(row.t) >= t_far) {
      t_far = std::abs(row.t);
      inner_far = row.inner;
    }
  r.meta()["inner_at_t_max"] = inner_far;
  r.add("inner_mass", cfg.params.inner_limit - inner_far,
        "||1_{B_r} psi_t|| at the largest |t| against the limit");
  try {
    const double k = fit_outer_decay_exponent(rep, cfg.params.fit_t_min, cfg.params.fit_t_max);
    r.meta()["outer_decay_exponent"] = k;
    r.add("outer_decay_exponent", cfg.params.exponent_limit - k,
          "log-log slope of the outer norm against 1 + |t|");
  } catch (const ArgumentError& err) {
    r.add("outer_decay_exponent", -1.0, err.what());
  }
}

void run_asymptotic_causality(Runner& r) {
  const auto& cfg = r.cfg();
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  const double t_cap = std::max(cfg.time.t_abs_max(), std::abs(cfg.params.leak_time));
  r.require_runtime_horizon(st.field, t_cap);
  const auto times = r.times();
  const ShellReport dirac = shell_report(st.field, times, cfg.params.shell_radius);
  const ShellReport nw = shell_report(st.field, times, cfg.params.shell_radius, Dynamics::newton_wigner,
                                      cfg.params.eta);
  r.write_csv("shell.csv", shell_csv(dirac));
  r.write_csv("shell_nw.csv", shell_csv(nw));

  const double r0 = st.nominal_radius;
  const double tol = cfg.single_tol();
  const Propagator prop(st.field);
  Csv leak;
  leak.header = {"t", "dirac_leak", "nw_leak"};
  CheckReport cone{"dirac_light_cone", cfg.params.dirac_max_leak, "", {}};
  for (double t : times) {
    const double ld = outside_ball_mass(prop.at(t), r0 + std::abs(t) + tol);
    const double ln = outside_ball_mass(prop.nw_at(t, cfg.params.eta), r0 + std::abs(t) + tol);
    leak.row({t, ld, ln});
    cone.entries.push_back({t, {0, 0, 0}, ld, cfg.params.dirac_max_leak, cfg.params.dirac_max_leak - ld});
  }
  r.write_csv("leak.csv", leak);
  r.add("dirac_light_cone", cone);
  r.skip("nw_causality", "Newton-Wigner evolution is not causal; the causality checker does not apply");
  const double tl = cfg.params.leak_time;
  const double ld = outside_ball_mass(prop.at(tl), r0 + std::abs(tl) + tol);
  const double ln = outside_ball_mass(prop.nw_at(tl, cfg.params.eta), r0 + std::abs(tl) + tol);
  r.meta()["leak_time"] = tl;
  r.meta()["dirac_leak"] = ld;
  r.meta()["nw_leak"] = ln;
  r.meta()["nw_leak_above_threshold"] = ln >= cfg.params.nw_min_leak;
  r.meta()["dirac_leak_below_threshold"] = ld <= cfg.params.dirac_max_leak;
  r.add("nw_leak_separation", ln - ld, "Newton-Wigner leak exceeds the Dirac leak");
}

void run_efsinc(Runner& r) {
  const auto& q = r.cfg().params;
  Csv cos_csv;
  Csv sinc_csv;
  cos_csv.header = sinc_csv.header = {"t", "mu", "u", "v", "log_lower", "log_value", "log_upper"};
  const auto us = linspace(q.u_min, q.u_max, q.u_count);
  for (double t : q.t_values) {
    for (double mu : q.mu_values) {
      const double c = efsinc_constants(t, mu).v_threshold;
      std::vector<double> vs;
      for (int k = 1; k <= q.v_count; ++k) vs.push_back(c + (q.v_max - c) * k / q.v_count);
      const EfsincReport rep = efsinc_check(t, mu, us, vs);
      for (const auto& row : rep.cos_rows)
        cos_csv.row({t, mu, row.u, row.v, row.log_lower, row.log_value, row.log_upper});
      for (const auto& row : rep.sinc_rows)
        sinc_csv.row({t, mu, row.u, row.v, row.log_lower, row.log_value, row.log_upper});
      const std::string tag = "t=" + short_double(t) + ",mu=" + short_double(mu);
      r.add("efsinc_cos[" + tag + "]", rep.cos_violations() == 0 ? 0.0 : -rep.cos_violations(),
            "negative margin counts violations");
      r.add("efsinc_sinc[" + tag + "]", rep.sinc_violations() == 0 ? 0.0 : -rep.sinc_violations(),
            "negative margin counts violations");
    }
  }
  r.write_csv("efsinc.csv", cos_csv);
  r.write_csv("efsinc_sinc.csv", sinc_csv);
}

void run_indicator(Runner& r) {
  const auto& cfg = r.cfg();
  const auto& q = cfg.params;
  const int dim = cfg.grid.dim;
  Csv cos_csv;
  Csv sinc_csv;
  cos_csv.header = sinc_csv.header = {"t", "lambda_x", "lambda_y", "lambda_z", "r", "estimate"};
  for (double t : q.t_values) {
    for (const Vec3& lam : q.lambdas) {
      const double target = std::abs(t) * norm(lam);
      const auto c = p_indicator_estimate(
          [&](const ComplexPoint& z) { return entire_cos_log(t, z, cfg.mass); }, dim, lam, q.x,
          q.r_schedule);
      const auto s = p_indicator_estimate(
          [&](const ComplexPoint& z) { return entire_sinc_log(t, z, cfg.mass); }, dim, lam, q.x,
          q.r_schedule, 1.0);
      for (const auto& row : c.rows) cos_csv.row({t, lam[0], lam[1], lam[2], row.r, row.estimate});
      for (const auto& row : s.rows) sinc_csv.row({t, lam[0], lam[1], lam[2], row.r, row.estimate});
      const std::string tag = "t=" + short_double(t) + ",lambda=" + short_double(lam[0]) + "/" +
                              short_double(lam[1]) + "/" + short_double(lam[2]);
      r.add("indicator_cos[" + tag + "]", q.relative_tolerance * target - std::abs(c.last - target));
      r.add("indicator_sinc[" + tag + "]", q.relative_tolerance * target - std::abs(s.last - target));
    }
  }
  r.write_csv("indicator.csv", cos_csv);
  r.write_csv("indicator_sinc.csv", sinc_csv);
}

void run_pp_consistency(Runner& r) {
  const auto& cfg = r.cfg();
  const auto& q = cfg.params;
  BuiltState st = r.build();
  r.meta()["state"] = st.meta;
  const SpinorField& psi = st.field;
  int comp = q.component.value_or(-1);
  if (comp < 0) {
    double best = -1.0;
    for (int c = 0; c < psi.components(); ++c) {
      double s = 0.0;
      for (const auto& v : psi.component(c)) s += std::norm(v);
      if (s > best) {
        best = s;
        comp = c;
      }
    }
  }
  r.meta()["component"] = comp;
  Csv csv;
  csv.header = {"lambda_x", "lambda_y", "lambda_z", "r", "estimate"};
  Csv support;
  support.header = {"lambda_x", "lambda_y", "lambda_z", "support_function", "analytic", "extrapolated"};
  const auto& s = cfg.state;
  for (const Vec3& lam : q.lambdas) {
    const auto est = p_indicator_estimate(
        [&](const ComplexPoint& z) { return fourier_laplace_log(psi, z, comp); }, cfg.grid.dim, lam, q.x,
        q.r_schedule);
    for (const auto& row : est.rows) csv.row({lam[0], lam[1], lam[2], row.r, row.estimate});
    const double analytic = dot(s.center, lam) + s.radius * norm(lam);
    const double h = support_function(psi, lam, cfg.delta);
    support.row({lam[0], lam[1], lam[2], h, analytic, est.extrapolated});
    const std::string tag = short_double(lam[0]) + "/" + short_double(lam[1]) + "/" + short_double(lam[2]);
    r.add("indicator_vs_ball[" + tag + "]",
          q.relative_tolerance * std::abs(analytic) - std::abs(est.last - analytic));
    r.meta()["support_comparison"].push_back(
        {{"lambda", vec_json(cfg.grid, lam)}, {"estimate", est.last}, {"support_function", h},
         {"relative_difference", std::abs(est.last - h) / std::abs(h)}});
  }
  r.skip("indicator_vs_support", "reported in metadata: the delta-carrier sits inside the exact support");
  r.write_csv("indicator.csv", csv);
  r.write_csv("support.csv", support);
}

// Far-face slab cuts of a slab-symmetric state, measuring s t_ebar against half the width.
void run_gpteb_search(Runner& r) {
  const auto& cfg = r.cfg();
  StateRecipe src = cfg.state;
  src.kind = "dsabtp";
  const BuiltState eta = r.build_state(src, cfg.seed);
  r.meta()["state"] = eta.meta;
  const double sign = src.tau >= 0.0 ? 1.0 : -1.0;
  const Vec3 e = r.direction();
  const auto times = r.times();
  r.require_runtime_horizon(eta.field, cfg.time.t_abs_max());
  const double far = -border(eta.field, -e, cfg.delta);
  Csv csv;
  csv.header = {"thickness", "kept_fraction", "e_border", "ebar_border", "width", "t_e", "t_ebar",
                "half_width", "margin"};
  CheckReport rep{"gpteb", cfg.compound_tol(), "s t_ebar >= width / 2 - tol", {}};
  for (double th : cfg.params.thicknesses) {
    const SlabCut cut = slab_cut(eta.field, e, far - th, far);
    const BorderTable table = sample_borders(cut.field, {e, -e}, times, cfg.delta);
    const double eb = border(cut.field, e, cfg.delta);
    const double ebb = border(cut.field, -e, cfg.delta);
    const double width = -ebb - eb;
    double t_e = std::nan("");
    double t_ebar = std::nan("");
    try {
      t_e = fit_tent(table.trace(0)).t_e;
    } catch (const ApexNotBracketedError&) {
    }
    try {
      t_ebar = fit_tent(table.trace(1)).t_e;
    } catch (const ApexNotBracketedError&) {
    }
    const double margin = sign * t_ebar - (0.5 * width - cfg.compound_tol());
    csv.row({th, cut.kept_fraction, eb, ebb, width, t_e, t_ebar, 0.5 * width, margin});
    rep.entries.push_back({th, e, sign * t_ebar, 0.5 * width - cfg.compound_tol(),
                           std::isnan(margin) ? -1.0 : margin});
  }
  r.write_csv("gpteb.csv", csv);
  r.add("gpteb", rep);
}

void run_open_problem_search(Runner& r) {
  const auto& cfg = r.cfg();
  const auto& q = cfg.params;
  const GridSpec& g = cfg.grid;
  const Vec3 e = r.direction();
  const auto times = r.times();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const StateRecipe& s = cfg.state;
  const double half = 0.5 * (s.b - s.a);
  Csv csv;
  csv.header = {"sample", "kind", "tau", "delta_shift", "thickness", "width", "t_e", "t_ebar", "ratio"};
  double best = 0.0;
  for (int k = 0; k < q.samples; ++k) {
    const std::uint64_t seed = rng();
    const bool slab = (k % 2) == 1;
    SpinorField psi(g, Space::position, cfg.representation, cfg.mass);
    double tau = 0.0, shift = 0.0, thickness = 0.0;
    try {
      if (!slab) {
        const double rho = half * (0.3 + 0.4 * unit(rng));
        const SpinorField psi1 = bump_state(g, scaled(e, 0.5 * (s.a + s.b)), rho,
                                            random_spinor(state_components(g), seed), cfg.mass,
                                            cfg.representation);
        tau = (2.0 * unit(rng) - 1.0) * 0.5 * rho;
        shift = lattice_round_up(g, std::abs(tau));
        psi = nise_state(psi1, e, tau, shift).field;
      } else {
        tau = (2.0 * unit(rng) - 1.0) * 0.8 * half;
        const auto ds = dsabtp_state(g, e, s.a, s.b, tau, cfg.mass, seed, cfg.representation,
                                     BaseTurning{0.0, 0.0});
        const double far = -border(ds.field, -e, cfg.delta);
        thickness = lattice_round_up(g, (0.1 + 0.5 * unit(rng)) * (s.b - s.a));
        psi = slab_cut(ds.field, e, far - thickness, far).field;
      }
    } catch (const std::exception& err) {
      r.meta()["skipped_samples"].push_back({{"sample", k}, {"reason", err.what()}});
      continue;
    }
    const double width = -border(psi, -e, cfg.delta) - border(psi, e, cfg.delta);
    const BorderTable table = sample_borders(psi, {e, -e}, times, cfg.delta);
    double t_e = std::nan(""), t_ebar = std::nan("");
    try {
      t_e = fit_tent(table.trace(0)).t_e;
    } catch (const ApexNotBracketedError&) {
    }
    try {
      t_ebar = fit_tent(table.trace(1)).t_e;
    } catch (const ApexNotBracketedError&) {
    }
    const double ratio = std::abs(t_ebar) / (0.5 * width);
    if (std::isfinite(ratio)) best = std::max(best, ratio);
    csv.row({static_cast<double>(k), slab ? 1.0 : 0.0, tau, shift, thickness, width, t_e, t_ebar, ratio});
  }
  r.write_csv("open_problem.csv", csv);
  r.meta()["max_ratio"] = best;
  r.skip("open_problem", "report only: largest |t_ebar| / (width / 2) = " + format_double(best) +
                             " (kind column: 0 nise, 1 slab)");
}

}  // namespace

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg, const fs::path& out_dir) {
  apply_thread_limit();
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Runner r(cfg, out_dir);
  const std::string& x = cfg.experiment;
  if (x == "tent") run_tent(r);
  else if (x == "trembling") run_trembling(r);
  else if (x == "min_law") run_min_law(r);
  else if (x == "upper_bound") run_upper_bound(r);
  else if (x == "long_term") run_long_term(r);
  else if (x == "shell") run_shell(r);
  else if (x == "asymptotic_causality") run_asymptotic_causality(r);
  else if (x == "efsinc") run_efsinc(r);
  else if (x == "indicator") run_indicator(r);
  else if (x == "pp_consistency") run_pp_consistency(r);
  else if (x == "gpteb_search") run_gpteb_search(r);
  else if (x == "open_problem_search") run_open_problem_search(r);
  else throw ConfigError("unknown experiment '" + x + "'");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunResult res = std::move(r.result());
  json m;
  m["tool"] = "dirac-front";
  m["version"] = tool_version();
  m["experiment"] = cfg.experiment;
  m["config"] = cfg.raw;
  m["seed"] = cfg.seed;
  m["grid"] = {{"dim", cfg.grid.dim},
               {"n", cfg.grid.n},
               {"extent", cfg.grid.extent},
               {"dx", cfg.grid.dx()},
               {"dp", cfg.grid.dp()}};
  m["mass"] = cfg.mass;
  m["representation"] = to_string(cfg.representation);
  m["delta"] = cfg.delta;
  m["tolerances"] = {{"single", cfg.single_tol()},
                     {"compound", cfg.compound_tol()},
                     {"slope", cfg.tolerances.slope},
                     {"time", cfg.time_tol()}};
  m["threads"] = configured_threads();
  m["started_at"] = started;
  m["wall_seconds"] = wall;
  m["metadata"] = r.meta();
  json checks = json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : res.checks) {
    json j = {{"name", c.name}, {"passed", c.passed}, {"skipped", c.skipped}};
    if (!c.skipped) {
      j["violations"] = c.violations;
      j["worst_margin"] = c.worst_margin;
      worst = std::min(worst, c.worst_margin);
    }
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  m["checks"] = checks;
  m["all_passed"] = res.all_passed();
  m["worst_margin"] = std::isfinite(worst) ? json(worst) : json(nullptr);
  m["outputs"] = res.outputs;
  res.manifest = m;
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << m.dump(2) << "\n";
  res.outputs.push_back("manifest.json");
  return res;
}

}  // namespace dirac_front
