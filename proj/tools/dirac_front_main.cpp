#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "dirac_front/experiment.hpp"
#include "dirac_front/parallel.hpp"

namespace df = dirac_front;

namespace {

int report_config_error(const df::ConfigError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirac-front: free Dirac propagation laboratory"};
  app.set_version_flag("--version", df::tool_version());
  app.require_subcommand(1);

  std::string run_config;
  std::string out_dir;
  bool strict = false;
  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("config", run_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_flag("--strict", strict, "exit with status 1 when any check fails");
  run->add_option("--out", out_dir, "output directory (default: the config's output field)");

  auto* list = app.add_subcommand("list", "list the available experiments");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "validate a config without running it");
  validate->add_option("config", validate_config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  df::apply_thread_limit();

  if (list->parsed()) {
    for (const auto& e : df::list_experiments())
      std::cout << e.name << "\t" << e.description << "\t[" << e.anchor << "]\n";
    return 0;
  }

  if (validate->parsed()) {
    try {
      const auto cfg = df::load_config(validate_config);
      std::cout << "ok: " << cfg.experiment << " (grid dim " << cfg.grid.dim << ", n " << cfg.grid.n
                << ", extent " << cfg.grid.extent << ")\n";
      return 0;
    } catch (const df::ConfigError& e) {
      return report_config_error(e);
    }
  }

  df::ExperimentConfig cfg;
  try {
    cfg = df::load_config(run_config);
  } catch (const df::ConfigError& e) {
    return report_config_error(e);
  }
  const std::filesystem::path out = out_dir.empty() ? std::filesystem::path(cfg.output) : std::filesystem::path(out_dir);
  try {
    const auto res = df::run(cfg, out);
    for (const auto& c : res.checks) {
      std::cout << (c.skipped ? "SKIP" : c.passed ? "PASS" : "FAIL") << "  " << c.name;
      if (!c.skipped)
        std::cout << "  violations=" << c.violations << "  worst_margin=" << df::format_double(c.worst_margin);
      if (!c.note.empty()) std::cout << "  (" << c.note << ")";
      std::cout << "\n";
    }
    std::cout << "outputs written to " << out.string() << "\n";
    if (strict && !res.all_passed()) return 1;
    return 0;
  } catch (const df::ConfigError& e) {
    return report_config_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
