#include "pdc/wigner_sim.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>

#include "pdc/errors.hpp"

namespace pdc {

using namespace std::complex_literals;

Field sample_vacuum(const SimGrid& grid, std::uint64_t seed, std::uint64_t realization) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(realization),
                    static_cast<std::uint32_t>(realization >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 0.5);
  Field a(grid.size());
  for (cplx& v : a) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
  return a;
}

double peak_pixel_photons(const PumpProfile& pump, const SimGrid& grid) {
  if (pump.peak_flux > 0) return pump.peak_flux * grid.direct_pixel();
  return kDefaultPeakPixelPhotons;
}

Field make_input_pump(const PumpProfile& pump, const SimGrid& grid) {
  pump.validate();
  const double amp = std::sqrt(peak_pixel_photons(pump, grid));
  Field p(grid.size());
  double edge = 0;
  for (int ix = 0; ix < grid.nx(); ++ix)
    for (int it = 0; it < grid.nt(); ++it) {
      const cplx a = pump.amplitude(grid.x(ix), grid.t(it));
      p[grid.index(ix, it)] = amp * a;
      const bool border = ix == grid.nx() / 2 || it == grid.nt() / 2;
      if (border) edge = std::max(edge, std::norm(a));
    }
  if (!pump.plane_wave && edge > kPumpEdgeTolerance) {
    std::ostringstream os;
    os << "pump envelope intensity at the grid edge is " << edge << " (window " << grid.nx() * grid.dx()
       << " um x " << grid.nt() * grid.dt() << " fs); widen the grid or shrink the pump";
    throw ConfigError("pump", os.str());
  }
  Fft2D fft(grid.nx(), grid.nt());
  fft.forward(p.data());
  const double s = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (cplx& v : p) v *= s;
  return p;
}

Propagator::Propagator(const SimGrid& grid, const Crystal& crystal, const PumpProfile& pump,
                       SimParams params)
    : grid_(grid), params_(params), length_(crystal.length_um()),
      fft_(grid.nx(), grid.nt()) {
  if (params_.n_steps < 1) throw ConfigError("simulation.n_steps", "must be >= 1");
  if (params_.gain < 0) throw ConfigError("simulation.gain", "must be non-negative");
  peak_pixel_ = pdc::peak_pixel_photons(pump, grid);
  sigma_ = params_.gain / (length_ * std::sqrt(peak_pixel_));
  pump_in_ = make_input_pump(pump, grid);

  const WalkoffConstants wc = crystal.walkoff_constants();
  const double ks0 = crystal.kz({0, 0}, Wave::signal);
  const double h = 0.5 * dz();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  const std::size_t n = grid.size();
  half_s_.resize(n);
  half_p_.resize(n);
  full_s_.resize(n);
  full_p_.resize(n);
  for (int ix = 0; ix < grid.nx(); ++ix)
    for (int it = 0; it < grid.nt(); ++it) {
      const SpectralMode w = grid.mode(ix, it);
      const double frame = wc.k1_pump * w.omega + wc.rho_p_rad * w.q;
      const double ls = crystal.kz(w, Wave::signal) - ks0 - frame;
      const double lp = crystal.kz(w, Wave::pump) - 2 * ks0 - frame;
      const std::size_t i = grid.index(ix, it);
      half_s_[i] = std::exp(1i * (ls * h)) * inv_sqrt_n;
      half_p_[i] = std::exp(1i * (lp * h)) * inv_sqrt_n;
      full_s_[i] = std::exp(1i * (ls * 2 * h));
      full_p_[i] = std::exp(1i * (lp * 2 * h));
    }
  fused_s_.resize(n);
  fused_p_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fused_s_[i] = half_s_[i] * half_s_[i];
    fused_p_[i] = half_p_[i] * half_p_[i];
  }
}

FieldState Propagator::initial_state(Field signal) const {
  if (signal.size() != grid_.size()) throw ComparisonError("signal field does not match the grid");
  FieldState s;
  s.signal = std::move(signal);
  s.pump = pump_in_;
  return s;
}

kernels::NonlinearStats Propagator::step(FieldState& st, kernels::Exec exec) const {
  kernels::NonlinearStats stats;
  if (sigma_ == 0) {
    kernels::apply_phase(exec, st.signal, full_s_);
    kernels::apply_phase(exec, st.pump, full_p_);
  } else {
    kernels::apply_phase(exec, st.signal, half_s_);
    kernels::apply_phase(exec, st.pump, half_p_);
    fft_.backward(st.signal.data());
    fft_.backward(st.pump.data());
    stats = kernels::nonlinear_step(exec, st.signal, st.pump, sigma_ * dz(), params_.scheme);
    fft_.forward(st.signal.data());
    fft_.forward(st.pump.data());
    kernels::apply_phase(exec, st.signal, half_s_);
    kernels::apply_phase(exec, st.pump, half_p_);
  }
  st.step += 1;
  st.z = st.step * dz();
  return stats;
}

PropagationAudit Propagator::propagate(FieldState& st, kernels::Exec exec) const {
  PropagationAudit a;
  a.signal_in = kernels::photon_number(st.signal);
  a.pump_in = kernels::photon_number(st.pump);
  const double inv0 = a.signal_in + 2 * a.pump_in;
  double ns = a.signal_in, np = a.pump_in;
  auto check = [&] {
    if (!std::isfinite(ns) || !std::isfinite(np))
      throw PropagationError("non-finite field", st.z, st.step);
    a.max_drift = std::max(a.max_drift, std::abs(ns + 2 * np - inv0) / inv0);
  };
  if (sigma_ == 0 || st.step >= params_.n_steps) {
    while (st.step < params_.n_steps) {
      step(st, exec);
      ns = kernels::photon_number(st.signal);
      np = kernels::photon_number(st.pump);
      check();
    }
  } else {
    // Same composition as repeated step(), with the adjacent half phases of
    // consecutive steps fused into one multiply.
    kernels::apply_phase(exec, st.signal, half_s_);
    kernels::apply_phase(exec, st.pump, half_p_);
    while (true) {
      fft_.backward(st.signal.data());
      fft_.backward(st.pump.data());
      const kernels::NonlinearStats stats =
          kernels::nonlinear_step(exec, st.signal, st.pump, sigma_ * dz(), params_.scheme);
      a.max_sweeps = std::max(a.max_sweeps, stats.sweeps);
      a.max_residual = std::max(a.max_residual, stats.residual);
      ns = kernels::photon_number(st.signal);
      np = kernels::photon_number(st.pump);
      fft_.forward(st.signal.data());
      fft_.forward(st.pump.data());
      st.step += 1;
      st.z = st.step * dz();
      check();
      const bool last = st.step >= params_.n_steps;
      kernels::apply_phase(exec, st.signal, last ? half_s_ : fused_s_);
      kernels::apply_phase(exec, st.pump, last ? half_p_ : fused_p_);
      if (last) break;
    }
  }
  a.signal_out = ns;
  a.pump_out = np;
  a.depletion = a.pump_in > 0 ? 1.0 - np / a.pump_in : 0.0;
  return a;
}

int resolve_batch_size(std::int64_t realizations, int requested) {
  if (requested > 0) return requested;
  const std::int64_t per = (realizations + kDefaultBatches - 1) / kDefaultBatches;
  return static_cast<int>(std::max<std::int64_t>(2, per));
}

EnsembleResult run_ensemble(const Propagator& prop, const EstimatorOptions& options,
                            const EnsembleConfig& cfg,
                            const std::function<void(std::int64_t)>& progress) {
  if (cfg.realizations < 1) throw ConfigError("simulation.realizations", "must be >= 1");
  if (cfg.workers < 1) throw ConfigError("simulation.workers", "must be >= 1");
  const std::int64_t bsize = resolve_batch_size(cfg.realizations, cfg.batch_size);
  const std::int64_t nbatches = (cfg.realizations + bsize - 1) / bsize;
  const kernels::Exec exec = cfg.workers > 1 ? kernels::Exec::serial : kernels::Exec::parallel;

  EnsembleResult res{MomentAccumulator(prop.grid(), options)};
  std::int64_t done = 0;
  for (std::int64_t wave = 0; wave < nbatches; wave += cfg.workers) {
    const int width = static_cast<int>(std::min<std::int64_t>(cfg.workers, nbatches - wave));
    std::vector<MomentSums> sums(width);
    std::vector<GaussianityBatch> gauss(width);
    std::vector<PropagationAudit> worst(width);
    std::vector<std::exception_ptr> errors(width);
#pragma omp parallel for num_threads(width) schedule(static, 1)
    for (int k = 0; k < width; ++k) {
      try {
        const std::int64_t b = wave + k;
        const std::int64_t r0 = b * bsize;
        const std::int64_t r1 = std::min(cfg.realizations, r0 + bsize);
        Correlator corr(prop.grid(), options);
        GaussianitySums gs;
        for (std::int64_t r = r0; r < r1; ++r) {
          FieldState st = prop.initial_state(sample_vacuum(prop.grid(), cfg.seed, r));
          PropagationAudit a;
          try {
            a = prop.propagate(st, exec);
          } catch (const PropagationError& e) {
            throw PropagationError("realization " + std::to_string(r) + ": " + e.what(), e.z_um(),
                                   e.step());
          }
          worst[k].max_drift = std::max(worst[k].max_drift, a.max_drift);
          worst[k].depletion = std::max(worst[k].depletion, a.depletion);
          worst[k].max_sweeps = std::max(worst[k].max_sweeps, a.max_sweeps);
          corr.accumulate(st.signal, sums[k], &gs);
        }
        gauss[k] = gaussianity_batch(gs);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (int k = 0; k < width; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      done += sums[k].count;
      res.max_drift = std::max(res.max_drift, worst[k].max_drift);
      res.max_depletion = std::max(res.max_depletion, worst[k].depletion);
      res.max_sweeps = std::max(res.max_sweeps, worst[k].max_sweeps);
      res.moments.add_batch(std::move(sums[k]), gauss[k]);
    }
    if (progress) progress(done);
  }
  return res;
}

}  // namespace pdc
