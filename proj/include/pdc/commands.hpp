#pragma once

// Batch commands behind the pdcsim front-end. Each returns a process exit
// code: 0 success, 1 error, 2 comparison failure.
//
// Output layout of one run directory:
//   config.json                canonical configuration
//   g_<gain>/...               per-gain arrays (.bin + .json) and summary.json
//   summary.tsv, plot_*.py     tables and plot scripts
//   manifest.json              version, seed, timing and SHA-256 of every file

#include <filesystem>
#include <ostream>
#include <string>

#include "pdc/array_io.hpp"
#include "pdc/config.hpp"
#include "pdc/estimators.hpp"

namespace pdc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitComparisonFailed = 2;

int cmd_predict(const ExperimentConfig& cfg, std::ostream& log);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);
/// Re-finalizes the stored accumulators of a simulate run in place.
int cmd_analyze(const fs::path& sim_dir, std::ostream& log);
/// Joins a predict run and a simulate run into `out_dir/report.{json,tsv}`.
int cmd_compare(const fs::path& pred_dir, const fs::path& sim_dir, const fs::path& out_dir,
                std::ostream& log);

/// Planner and wisdom settings of `cfg` applied process-wide.
void apply_fft_settings(const ExperimentConfig& cfg);

/// Directory name of one gain, e.g. "g_0.5".
std::string gain_label(double g);

/// QS predictions for one gain; arrays are written under `dir` when non-null.
json qs_prediction(const ExperimentConfig& cfg, double g, const fs::path* dir);

/// Observables of a finalized ensemble with jackknife errors; arrays are
/// written under `dir` when non-null.
json analyze_moments(const MomentAccumulator& acc, const ExperimentConfig& cfg, double g,
                     const fs::path* dir);

void save_accumulator(const fs::path& dir, const MomentAccumulator& acc);
MomentAccumulator load_accumulator(const fs::path& dir);

/// Per-check comparison rows; `binding_failures` counts FAIL rows.
struct ComparisonReport {
  json rows = json::array();
  int binding_failures = 0;
};
ComparisonReport compare_runs(const fs::path& pred_dir, const fs::path& sim_dir);

/// 1/e half-width of the intensity profile along t (axis 1) or x (axis 0)
/// through (x0, t0), from the mean of the 3 adjacent lines.
double halfwidth_1e(const RealMap& map, const SimGrid& grid, int axis, double x0, double t0);

}  // namespace pdc
