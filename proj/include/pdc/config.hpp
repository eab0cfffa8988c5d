#pragma once

// Experiment configuration: a JSON document with unit-suffixed keys, an
// optional named preset as the starting point, and `key.path=value`
// overrides. Validation errors carry the dotted key path.

#include <cstdint>
#include <string>
#include <vector>

#include "pdc/array_io.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/grid.hpp"
#include "pdc/kernels.hpp"
#include "pdc/pump.hpp"

namespace pdc {

struct ExperimentConfig {
  std::string preset = "long-pump";
  CrystalParams crystal;
  PumpProfile pump;
  GridSpec grid;
  SpectralRegion region;
  std::vector<double> gains{1.0, 3.0, 7.0};
  std::int64_t realizations = 500;
  int n_steps = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  int batch_size = 0;
  kernels::NonlinearScheme scheme = kernels::NonlinearScheme::explicit_midpoint;
  std::string fft_planner = "estimate";
  std::string fft_wisdom;  // optional wisdom file imported before planning
  bool correlations = true;
  bool gaussianity = true;
  std::string output_dir = "pdc_out";

  /// Canonical JSON form; `from_json(to_json())` reproduces the config.
  json to_json() const;
  void validate() const;
};

/// Names accepted by `preset`: long-pump, short-pump, thin-crystal, plane-wave, wide-grid.
std::vector<std::string> experiment_presets();
json preset_json(const std::string& name);

/// Builds a config from `doc` layered over its preset. Unknown keys are errors.
ExperimentConfig config_from_json(const json& doc);

/// Applies "a.b.c=value"; value is parsed as JSON when possible, else taken as a string.
void apply_override(json& doc, const std::string& assignment);

/// Reads `path` (may be empty for the bare preset), applies overrides, validates.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Default worker count: $PDC_WORKERS if set, else 1.
int default_workers();

}  // namespace pdc
