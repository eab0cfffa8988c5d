// pdcsim: QS predictions, truncated-Wigner ensembles, re-analysis and comparison.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdc/commands.hpp"
#include "pdc/errors.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("config", a.config, "JSON configuration (omit for the preset defaults)");
  cmd->add_option("--set,-s", a.overrides, "Override a key, e.g. --set simulation.realizations=200")
      ->take_all();
  cmd->add_option("--out,-o", a.out, "Output directory (overrides output_dir)");
}

pdc::ExperimentConfig build_config(const RunArgs& a) {
  std::vector<std::string> ov = a.overrides;
  if (!a.out.empty()) ov.push_back("output_dir=\"" + a.out + "\"");
  return pdc::load_config(a.config, ov);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed parametric down-conversion: QS model and truncated-Wigner simulator"};
  app.set_version_flag("--version", pdc::version_string());
  app.require_subcommand(1);

  RunArgs pred, sim;
  auto* predict = app.add_subcommand("predict", "Evaluate the quasi-stationary model");
  add_run_options(predict, pred);
  auto* simulate = app.add_subcommand("simulate", "Run a truncated-Wigner ensemble");
  add_run_options(simulate, sim);

  std::string analyze_dir;
  auto* analyze = app.add_subcommand("analyze", "Recompute observables of a simulate run");
  analyze->add_option("dir", analyze_dir, "simulate output directory")->required();

  std::string cmp_pred, cmp_sim, cmp_out = "pdc_compare";
  auto* compare = app.add_subcommand("compare", "Compare a predict run with a simulate run");
  compare->add_option("prediction", cmp_pred, "predict output directory")->required();
  compare->add_option("simulation", cmp_sim, "simulate output directory")->required();
  compare->add_option("--out,-o", cmp_out, "Report directory");

  auto* presets = app.add_subcommand("presets", "List configuration presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? pdc::kExitOk : pdc::kExitError;
  }

  try {
    if (*predict) return pdc::cmd_predict(build_config(pred), std::cout);
    if (*simulate) return pdc::cmd_simulate(build_config(sim), std::cout);
    if (*analyze) return pdc::cmd_analyze(analyze_dir, std::cout);
    if (*compare) return pdc::cmd_compare(cmp_pred, cmp_sim, cmp_out, std::cout);
    if (*presets) {
      for (const auto& p : pdc::experiment_presets()) std::cout << p << "\n";
      return pdc::kExitOk;
    }
  } catch (const pdc::ConfigError& e) {
    std::cerr << "configuration error at '" << e.key() << "': " << e.what() << "\n";
  } catch (const pdc::ComparisonError& e) {
    std::cerr << "cannot compare: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return pdc::kExitError;
}
