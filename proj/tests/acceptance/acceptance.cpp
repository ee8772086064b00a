// Acceptance criteria 1-15: one PASS/FAIL line each.
// Usage: acceptance [--criterion N]

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "dirac_front/border.hpp"
#include "dirac_front/evolution.hpp"
#include "dirac_front/experiment.hpp"
#include "dirac_front/exponential_type.hpp"
#include "dirac_front/mass.hpp"
#include "dirac_front/parallel.hpp"
#include "dirac_front/states.hpp"
#include "test_helpers.hpp"

using namespace dirac_front;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string g3(double x) { return fmt("%.3g", x); }

// e^{i t h(p)} per mode from the eigendecomposition of h(p).
SpinorField oracle_evolve(const SpinorField& psi, double t) {
  SpinorField phi = psi.to_momentum();
  const DiracAlgebra alg = phi.algebra();
  const GridSpec& g = phi.grid();
  parallel_for(phi.voxels(), [&](std::size_t i) {
    const Eigen::MatrixXcd h = h_matrix(g.momentum_vector(i), phi.mass(), alg);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd ph = (es.eigenvalues().cast<cdouble>() * cdouble(0.0, t)).array().exp().matrix();
    const Eigen::MatrixXcd u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    phi.set_spinor(i, u * phi.spinor(i));
  });
  return phi.to_position();
}

Outcome unitarity_group_law() {
  const GridSpec g = make_grid(3, 32, 8.0);
  const std::vector<double> ts{0.1, -0.1, 0.5, -0.5, 1.0, -1.0};
  double drift = 0.0, group = 0.0, oracle = 0.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const SpinorField psi = testing::random_state(g, 1000 + s);
    const Propagator prop(psi);
    for (double t : ts) {
      const SpinorField a = prop.at(t);
      drift = std::max(drift, std::abs(a.squared_norm() / psi.squared_norm() - 1.0));
      for (double u : {0.5, -1.0}) group = std::max(group, evolve(a, u).max_abs_difference(prop.at(t + u)));
    }
    for (double t : {0.5, -1.0}) oracle = std::max(oracle, prop.at(t).max_abs_difference(oracle_evolve(psi, t)));
  }
  return {drift <= 1e-12 && group <= 1e-10 && oracle <= 1e-10,
          "norm drift " + g3(drift) + " (<= 1e-12), group-law defect " + g3(group) +
              " (<= 1e-10), eigendecomposition oracle defect " + g3(oracle)};
}

Outcome intro_shrinking() {
  const GridSpec g = make_grid(3, 128, 8.0);
  const double rho = 0.5, big_r = 1.0;
  const SpinorField chi = bump_state(g, {0, 0, 0}, rho, random_spinor(4, 2), 1.0);
  const SpinorField psi = evolve(chi, rho - big_r);
  const SpinorField psi_t0 = evolve(psi, big_r);
  const double in_big = outside_ball_mass(psi, big_r + 2 * g.dx());
  const double leak = outside_ball_mass(psi_t0, 2 * rho + 2 * g.dx());
  return {leak <= 1e-5, "mass of psi_{t0} outside B_{2 rho + 2 dx} = " + g3(leak) +
                            " (<= 1e-5); psi outside B_{R + 2 dx} = " + g3(in_big)};
}

const GridSpec kCube = make_grid(3, 128, 8.0);

SpinorField cube_bump() { return bump_state(kCube, {0, 0, 0}, 1.0, random_spinor(4, 7), 1.0); }

Outcome tent_law() {
  const SpinorField psi = cube_bump();
  const BorderTrace tr = border_trace(psi, {1, 0, 0}, linspace(-1.0, 1.0, 41));
  const TentFit unit = fit_tent(tr);
  const TentFit free = fit_tent(tr, TentMode::free_slope);
  const double dev = std::max(std::abs(free.slope_pre - 1.0), std::abs(free.slope_post + 1.0));
  return {unit.residual_rms <= 2 * kCube.dx() && dev <= 0.05,
          "residual_rms " + g3(unit.residual_rms) + " (<= 2 dx = " + g3(2 * kCube.dx()) +
              "), slopes " + g3(free.slope_pre) + " / " + g3(free.slope_post) + ", t_e " + g3(unit.t_e)};
}

Outcome causality_upper_bound() {
  const SpinorField psi = cube_bump();
  const auto dirs = axis_directions(kCube);
  const BorderTable table = sample_borders(psi, dirs, linspace(-1.0, 1.0, 21));
  const CheckReport causal = check_causality(table, 2 * kCube.dx());
  int upper = 0;
  double worst = 1e9;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const CheckReport r = check_upper_bound(table, d, 3 * kCube.dx(), fit_tent(table.trace(d)));
    upper += r.violations();
    worst = std::min(worst, r.worst_margin());
  }
  return {causal.violations() == 0 && upper == 0,
          "causality violations " + std::to_string(causal.violations()) + " (worst margin " +
              g3(causal.worst_margin()) + "), upper-bound violations " + std::to_string(upper) +
              " (worst margin " + g3(worst) + ") over 6 axes"};
}

Outcome min_law() {
  const SpinorField psi = cube_bump();
  int v = 0;
  double worst = 1e9;
  for (const Vec3& e : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
    const CheckReport r = check_min_law(psi, e, {0.25, 0.5, 1.0}, kDefaultDelta, 3 * kCube.dx());
    v += r.violations();
    worst = std::min(worst, r.worst_margin());
  }
  return {v == 0, "violations " + std::to_string(v) + ", worst margin " + g3(worst) + " (tol 3 dx)"};
}

const GridSpec kLine = make_grid(1, 1024, 12.8);

Outcome turning_budget() {
  const double tol = 3 * kLine.dx();
  const Vec3 e{1, 0, 0};
  const auto times = linspace(-2.0, 2.0, 81);
  const SpinorField bump = bump_state(kLine, {0.2, 0, 0}, 0.5, random_spinor(2, 31), 1.0);
  const SpinorField nise = nise_state(bump, e, 0.2, 0.25).field;
  const SpinorField eta = dsabtp_state(kLine, e, -1.0, 1.0, 0.7, 1.0, 5).field;
  const double far = -border(eta, -e);
  const SpinorField slab = slab_cut(eta, e, far - 0.3, far).field;
  std::string detail;
  bool ok = true;
  for (const auto& [name, psi] : std::vector<std::pair<std::string, SpinorField>>{
           {"bump", bump}, {"nise", nise}, {"slab", slab}}) {
    const TurningTimes tt = measure_turning_times(psi, e, times);
    const double width = -border(psi, -e) - border(psi, e);
    const CheckReport r = check_turning_budget(tt.e, tt.ebar, width, tol);
    ok = ok && r.passed();
    detail += name + ": |t_e| + |t_ebar| = " + g3(std::abs(tt.e.t_e) + std::abs(tt.ebar.t_e)) + " vs width " +
              g3(width) + "; ";
  }
  return {ok, detail + "tol 3 dx"};
}

Outcome trembling() {
  const Vec3 e{1, 0, 0};
  const SpinorField psi1 = bump_state(kLine, {0, 0, 0}, 0.5, random_spinor(2, 11), 1.0);
  const BaseTurning base = measure_base_turning(psi1, e, 1.25, 41);
  const NiseState ns = trembling_state(psi1, e, 0.0, 0.3, base);
  const auto times = linspace(-1.5, 1.5, 61);
  const double step = times[1] - times[0];
  const TurningTimes tt = measure_turning_times(ns.field, e, times);
  const double de = std::abs(tt.e.t_e - 0.0);
  const double db = std::abs(tt.ebar.t_e - 0.3);
  return {de <= 2 * step && db <= 2 * step,
          "measured (t_e, t_ebar) = (" + g3(tt.e.t_e) + ", " + g3(tt.ebar.t_e) + ") vs (0, 0.3), tol " +
              g3(2 * step)};
}

Outcome slab_symmetric() {
  const Vec3 e{1, 0, 0};
  const DsabtpState st = dsabtp_state(kLine, e, -1.0, 1.0, 0.4, 1.0, 3);
  const auto times = linspace(-2.0, 2.0, 81);
  const double step = times[1] - times[0];
  const TurningTimes tt = measure_turning_times(st.field, e, times);
  const double lo = border(st.field, e);
  const double hi = -border(st.field, -e);
  const bool inside = lo >= -1.0 - 2 * kLine.dx() && hi <= 1.0 + 2 * kLine.dx();
  const bool times_ok = std::abs(tt.e.t_e - 0.4) <= 2 * step && std::abs(tt.ebar.t_e - 0.4) <= 2 * step;
  return {inside && times_ok, "measured (t_e, t_ebar) = (" + g3(tt.e.t_e) + ", " + g3(tt.ebar.t_e) +
                                  ") vs 0.4 (tol " + g3(2 * step) + "), carrier [" + g3(lo) + ", " + g3(hi) +
                                  "] vs [-1, 1] (tol 2 dx)"};
}

Outcome long_term() {
  const GridSpec g = make_grid(3, 128, 10.0);
  const SpinorField psi = bump_state(g, {0, 0, 0}, 1.0, random_spinor(4, 5), 1.0);
  const double radius = carrier_radius(psi, kDefaultDelta);
  require_horizon(g, radius, 2 * radius + 1.0);
  const CheckReport r = check_long_term(psi, radius, kDefaultDelta, 3 * g.dx());
  return {r.passed(), "R = " + g3(radius) + ", violations " + std::to_string(r.violations()) + " of " +
                          std::to_string(r.entries.size()) + ", worst margin " + g3(r.worst_margin())};
}

Outcome shell() {
  const GridSpec g = make_grid(1, 4096, 256.0);
  const MomentumBump mb = momentum_bump_state(g, {1.5, 0, 0}, 0.5, random_spinor(2, 13), 1.0);
  const ShellReport rep = shell_report(mb.field, linspace(0.0, 10.0, 41), 0.5);
  const double inner = rep.rows.back().inner;
  const double k = fit_outer_decay_exponent(rep, 2.0, 10.0);
  return {inner <= 0.1 && k <= -2.0, "inner mass in B_0.5 at t = 10: " + g3(inner) +
                                         " (<= 0.1); outer-decay exponent over [2, 10]: " + g3(k) + " (<= -2)"};
}

Outcome efsinc() {
  int violations = 0;
  std::size_t rows = 0;
  std::vector<double> us;
  for (int k = 0; k < 200; ++k) us.push_back(-50.0 + 100.0 * k / 199);
  for (double t : {0.5, 1.0, 2.0}) {
    for (double mu : {0.0, 1.0, 3.0}) {
      const double c = efsinc_constants(t, mu).v_threshold;
      std::vector<double> vs;
      for (int k = 1; k <= 100; ++k) {
        vs.push_back(c + (50.0 - c) * k / 100);
        vs.push_back(-(c + (50.0 - c) * k / 100));
      }
      const EfsincReport r = efsinc_check(t, mu, us, vs);
      violations += r.violations();
      rows += r.cos_rows.size() + r.sinc_rows.size();
    }
  }
  return {violations == 0, "violations " + std::to_string(violations) + " over " + std::to_string(rows) +
                               " (cos + sinc) grid points"};
}

Outcome indicator() {
  double worst = 0.0;
  for (double t : {1.0, -0.5, 2.0}) {
    for (const Vec3& lam : {Vec3{0, 0, 1}, Vec3{0.6, 0.8, 0}, Vec3{1, 1, 1}}) {
      const double target = std::abs(t) * norm(lam);
      const auto c = p_indicator_estimate([&](const ComplexPoint& z) { return entire_cos_log(t, z, 1.0); }, 3,
                                          lam, {0, 0, 0}, {1e2, 1e3, 1e4});
      const auto s = p_indicator_estimate([&](const ComplexPoint& z) { return entire_sinc_log(t, z, 1.0); }, 3,
                                          lam, {0, 0, 0}, {1e2, 1e3, 1e4}, 1.0);
      worst = std::max({worst, std::abs(c.last - target) / target, std::abs(s.last - target) / target});
    }
  }
  return {worst <= 0.01, "largest relative error at r = 1e4: " + g3(worst) + " (<= 0.01)"};
}

Outcome plancherel_polya() {
  const GridSpec g = make_grid(3, 128, 4.0);
  const double big_r = 1.5;
  const SpinorField psi = bump_state(g, {0, 0, 0}, big_r, random_spinor(4, 19), 1.0);
  double worst = 0.0;
  for (const Vec3& lam : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{0.6, 0.8, 0}, Vec3{1, 1, 1}}) {
    const auto est = p_indicator_estimate(
        [&](const ComplexPoint& z) { return fourier_laplace_log(psi, z, 0); }, 3, lam, {0, 0, 0}, {1e2, 1e3, 1e4});
    const double target = big_r * norm(lam);
    worst = std::max(worst, std::abs(est.last - target) / target);
  }
  return {worst <= 0.05, "largest relative error against R |lambda| over 5 directions: " + g3(worst) + " (<= 0.05)"};
}

Outcome newton_wigner() {
  const SpinorField psi = cube_bump();
  const double t = 0.5;
  const double cone = 1.0 + t + 2 * kCube.dx();
  const double nw = outside_ball_mass(evolve_nw(psi, t, 1), cone);
  const double dirac = outside_ball_mass(evolve(psi, t), cone);
  return {nw > dirac, "NW leak " + g3(nw) + (nw >= 1e-3 ? " (>= 1e-3)" : " (< 1e-3)") + ", Dirac leak " +
                          g3(dirac) + (dirac <= 1e-5 ? " (<= 1e-5)" : " (> 1e-5)") + "; ordering asserted"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const fs::path configs = DIRAC_FRONT_CONFIG_DIR;
  const fs::path scratch = fs::temp_directory_path() / "dirac_front_acceptance_repro";
  fs::remove_all(scratch);
  int files = 0;
  int differing = 0;
  for (const std::string name : {"tent_1d", "trembling", "gpteb_search", "efsinc", "indicator", "shell"}) {
    const ExperimentConfig cfg = load_config(configs / (name + ".json"));
    const RunResult a = run(cfg, scratch / name / "a");
#ifdef _OPENMP
    omp_set_num_threads(2);
#endif
    const RunResult b = run(cfg, scratch / name / "b");
    apply_thread_limit();
    for (const auto& f : a.outputs) {
      if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
      ++files;
      if (slurp(scratch / name / "a" / f) != slurp(scratch / name / "b" / f)) ++differing;
    }
  }
  return {files > 0 && differing == 0,
          std::to_string(files) + " CSV files compared across repeated runs, " + std::to_string(differing) +
              " differ"};
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Outcome()>>> table = {
      {1, {"unitarity and group law", unitarity_group_law}},
      {2, {"shrinking bump localized in B_{2 rho}", intro_shrinking}},
      {3, {"tent law of the border", tent_law}},
      {4, {"causality and border upper bound", causality_upper_bound}},
      {5, {"symmetric minimum law", min_law}},
      {6, {"turning-time budget", turning_budget}},
      {7, {"trembling with prescribed turning times", trembling}},
      {8, {"symmetric turning times in a slab", slab_symmetric}},
      {9, {"long-term recession", long_term}},
      {10, {"shell concentration", shell}},
      {11, {"explicit cos/sinc sandwich", efsinc}},
      {12, {"indicator of cos and sinc", indicator}},
      {13, {"indicator equals the support function", plancherel_polya}},
      {14, {"Newton-Wigner contrast", newton_wigner}},
      {15, {"reproducibility", reproducibility}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_limit();
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  int failed = 0;
  for (const auto& [id, entry] : criteria()) {
    if (only != 0 && id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d [%s] %s: %s (%.1fs)\n", id, o.passed ? "PASS" : "FAIL", entry.first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
