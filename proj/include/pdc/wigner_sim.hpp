#pragma once

// Truncated-Wigner simulator of the coupled signal/pump equations
//   d a_s/dz = i L_s a_s + sigma a_p a_s^*,   d a_p/dz = i L_p a_p - (sigma/2) a_s^2
// (nonlinear terms local in xi, linear terms diagonal in w), integrated by a
// symmetric split step.
//
// Fields are photon-number amplitudes per pixel (|a|^2 = photons) in the
// frame moving with the pump group velocity and Poynting walk-off and
// rotating at the carriers k_s(0), 2 k_s(0). The linear operators are
//   L_s(w) = k_sz(w) - k_s(0)   - k'_p Omega - rho_p q,
//   L_p(w) = k_pz(w) - 2 k_s(0) - k'_p Omega - rho_p q,
// so the exact mismatch D(w; w0 - w) is retained at every order.

#include <cstdint>
#include <functional>

#include "pdc/dispersion.hpp"
#include "pdc/estimators.hpp"
#include "pdc/fft.hpp"
#include "pdc/grid.hpp"
#include "pdc/kernels.hpp"
#include "pdc/pump.hpp"

namespace pdc {

struct SimParams {
  double gain = 1.0;
  int n_steps = 200;
  kernels::NonlinearScheme scheme = kernels::NonlinearScheme::explicit_midpoint;
};

struct FieldState {
  Field signal;  // Fourier space, FFT order
  Field pump;
  double z = 0;  // um
  int step = 0;
};

struct PropagationAudit {
  double signal_in = 0, signal_out = 0;  // sum |a_s|^2
  double pump_in = 0, pump_out = 0;
  double max_drift = 0;   // max_z |I(z) - I(0)| / I(0),  I = N_s + 2 N_p
  double depletion = 0;   // 1 - N_p(l_c) / N_p(0)
  int max_sweeps = 0;
  double max_residual = 0;
};

/// Symmetric-ordered vacuum: complex Gaussian per Fourier pixel with
/// Re/Im variance 1/4. One independent stream per (seed, realization).
Field sample_vacuum(const SimGrid& grid, std::uint64_t seed, std::uint64_t realization);

/// Photons on the peak direct pixel, I_p0 dx dt.
double peak_pixel_photons(const PumpProfile& pump, const SimGrid& grid);

/// Coherent classical pump in Fourier space. Throws ConfigError when the
/// envelope intensity at the window edge exceeds kPumpEdgeTolerance.
Field make_input_pump(const PumpProfile& pump, const SimGrid& grid);
inline constexpr double kPumpEdgeTolerance = 1e-8;

class Propagator {
 public:
  Propagator(const SimGrid& grid, const Crystal& crystal, const PumpProfile& pump, SimParams params);

  const SimGrid& grid() const { return grid_; }
  const SimParams& params() const { return params_; }
  double length_um() const { return length_; }
  double dz() const { return length_ / params_.n_steps; }
  /// sigma = g / (l_c sqrt(peak pixel photons)).
  double coupling() const { return sigma_; }
  double peak_pixel_photons() const { return peak_pixel_; }
  const Field& input_pump() const { return pump_in_; }

  FieldState initial_state(Field signal) const;
  kernels::NonlinearStats step(FieldState& state,
                               kernels::Exec exec = kernels::Exec::parallel) const;
  /// Runs the remaining steps to z = l_c.
  PropagationAudit propagate(FieldState& state, kernels::Exec exec = kernels::Exec::parallel) const;

 private:
  SimGrid grid_;
  SimParams params_;
  double length_;
  double sigma_;
  double peak_pixel_;
  Field pump_in_;
  Field half_s_, half_p_;  // exp(i L dz/2) / sqrt(N)
  Field full_s_, full_p_;  // exp(i L dz), used when sigma = 0
  Field fused_s_, fused_p_;  // half^2, between consecutive nonlinear steps
  Fft2D fft_;
};

struct EnsembleConfig {
  std::uint64_t seed = 1;
  std::int64_t realizations = 1;
  int batch_size = 0;  // 0: about kDefaultBatches equal batches
  int workers = 1;
};

inline constexpr int kDefaultBatches = 16;
int resolve_batch_size(std::int64_t realizations, int requested);

struct EnsembleResult {
  MomentAccumulator moments;
  double max_drift = 0;
  double max_depletion = 0;
  int max_sweeps = 0;
};

/// Runs the realizations in fixed batches; batches are processed `workers`
/// at a time and merged in batch order, so the result does not depend on the
/// worker count. `progress` receives the number of finished realizations.
EnsembleResult run_ensemble(const Propagator& prop, const EstimatorOptions& options,
                            const EnsembleConfig& config,
                            const std::function<void(std::int64_t)>& progress = {});

}  // namespace pdc
