#include "pdc/commands.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "pdc/errors.hpp"
#include "pdc/qs_model.hpp"
#include "pdc/wigner_sim.hpp"

namespace pdc {

namespace {

json grid_axes(const SimGrid& grid, bool fourier) {
  if (fourier)
    return {{"axis0", "q_x ascending, 1/um"},
            {"axis1", "Omega ascending, rad/fs"},
            {"q0", ascending_axis0(grid, true).front()},
            {"dq", grid.dq()},
            {"omega0", ascending_axis1(grid, true).front()},
            {"domega", grid.domega()}};
  return {{"axis0", "x ascending, um"},
          {"axis1", "t ascending, fs"},
          {"x0", ascending_axis0(grid, false).front()},
          {"dx", grid.dx()},
          {"t0", ascending_axis1(grid, false).front()},
          {"dt", grid.dt()}};
}

json displacement_axes(const SimGrid& grid) {
  return {{"axis0", "q displacement (i - n_x/2) dq, 1/um"},
          {"axis1", "Omega displacement -(j - n_t/2) dOmega, rad/fs"},
          {"dq", grid.dq()},
          {"domega", grid.domega()}};
}

std::vector<std::size_t> shape2(const SimGrid& g) {
  return {static_cast<std::size_t>(g.nx()), static_cast<std::size_t>(g.nt())};
}

void write_real_map(const fs::path& base, const RealMap& fft_order, const SimGrid& grid,
                    bool fourier, const std::string& units) {
  json meta = grid_axes(grid, fourier);
  meta["units"] = units;
  write_array(base, to_ascending(fft_order, grid, fourier), shape2(grid), meta);
}

RealMap magnitude(const Field& a) {
  RealMap m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::abs(a[i]);
  return m;
}

bool short_pump(const ExperimentConfig& cfg, const WalkoffConstants& wc) {
  return !cfg.pump.plane_wave && cfg.pump.duration_fs < std::abs(wc.tau_gvm_fs);
}

// Mismatch map D(w) l_c in FFT order.
RealMap mismatch_map(const SimGrid& grid, const Crystal& crystal) {
  RealMap d(grid.size());
  for (int ix = 0; ix < grid.nx(); ++ix)
    for (int it = 0; it < grid.nt(); ++it)
      d[grid.index(ix, it)] = crystal.phase_mismatch_pwp(grid.mode(ix, it));
  return d;
}

// Modes on the Nyquist lines have no distinct partner -w on the grid.
bool nyquist_line(const SimGrid& grid, std::size_t i) {
  return static_cast<int>(i / grid.nt()) == grid.nx() / 2 ||
         static_cast<int>(i % grid.nt()) == grid.nt() / 2;
}

// Spectrum averaged in bins of D l_c next to the PWP |V|^2 over the same
// pixels. For a plane-wave pump the maximum must sit in the D = 0 bin.
json mismatch_profile(const RealMap& spectrum, const RealMap& mismatch, const SimGrid& grid,
                      double g) {
  constexpr double kBin = 0.25;
  constexpr int kHalf = 16;
  std::vector<double> sim(2 * kHalf, 0.0), qs(2 * kHalf, 0.0);
  std::vector<std::int64_t> count(2 * kHalf, 0);
  for (std::size_t i = 0; i < mismatch.size(); ++i) {
    if (nyquist_line(grid, i)) continue;
    const int b = static_cast<int>(std::floor(mismatch[i] / kBin + 0.5)) + kHalf;
    if (b < 0 || b >= 2 * kHalf) continue;
    sim[b] += spectrum[i];
    qs[b] += std::norm(pwp_gain(g, mismatch[i]).v);
    ++count[b];
  }
  json centers = json::array(), sj = json::array(), qj = json::array(), cj = json::array();
  double best = -1, best_center = NAN;
  for (int b = 0; b < 2 * kHalf; ++b) {
    if (!count[b]) continue;
    const double c = (b - kHalf) * kBin;
    centers.push_back(c);
    sj.push_back(sim[b] / count[b]);
    qj.push_back(qs[b] / count[b]);
    cj.push_back(count[b]);
    if (count[b] >= 50 && sim[b] / count[b] > best) {
      best = sim[b] / count[b];
      best_center = c;
    }
  }
  return {{"bin_width", kBin}, {"centers", centers}, {"sim", sj}, {"qs", qj},
          {"pixels", cj},      {"peak_bin_center", best_center}};
}

// Configuration as stored with the artifacts. The worker count changes only
// the schedule, never the results, so it lives in the manifest instead.
json artifact_config(const ExperimentConfig& cfg) {
  json j = cfg.to_json();
  j["simulation"].erase("workers");
  j.erase("output_dir");
  return j;
}

}  // namespace

std::string gain_label(double g) {
  std::ostringstream os;
  os << "g_" << g;
  return os.str();
}

void apply_fft_settings(const ExperimentConfig& cfg) {
  set_fft_planner(cfg.fft_planner == "measure" ? FftPlanner::measure : FftPlanner::estimate);
  if (!cfg.fft_wisdom.empty()) import_fft_wisdom(cfg.fft_wisdom);
}

double halfwidth_1e(const RealMap& map, const SimGrid& grid, int axis, double x0, double t0) {
  const int ix0 = grid.ix_of_x(x0), it0 = grid.it_of_t(t0);
  const int n = axis == 0 ? grid.nx() : grid.nt();
  const double step = axis == 0 ? grid.dx() : grid.dt();
  auto value = [&](int s) {
    double v = 0;
    for (int o = -1; o <= 1; ++o) {
      const int ix = axis == 0 ? ix0 + s : ix0 + o;
      const int it = axis == 0 ? it0 + o : it0 + s;
      v += map[grid.index(SimGrid::wrap_index(ix, grid.nx()), SimGrid::wrap_index(it, grid.nt()))];
    }
    return v / 3;
  };
  const double peak = value(0);
  const double level = peak / std::exp(1.0);
  double sides[2] = {0, 0};
  for (int dir = 0; dir < 2; ++dir) {
    const int sgn = dir == 0 ? 1 : -1;
    for (int s = 1; s < n / 2; ++s) {
      const double a = value(sgn * (s - 1)), b = value(sgn * s);
      if (b <= level) {
        sides[dir] = (s - 1 + (a - level) / (a - b)) * step;
        break;
      }
    }
  }
  return 0.5 * (sides[0] + sides[1]);
}

json qs_prediction(const ExperimentConfig& cfg, double g, const fs::path* dir) {
  const Crystal crystal(cfg.crystal);
  const SimGrid grid(cfg.grid);
  const WalkoffConstants wc = crystal.walkoff_constants();
  json out;
  out["gain"] = g;
  out["short_pump"] = short_pump(cfg, wc);
  out["walkoff"] = {{"tau_gvm_fs", wc.tau_gvm_fs},
                    {"l_woff_um", wc.l_woff_um},
                    {"rho_p_deg", wc.rho_p_rad * 180 / kPi}};
  if (!(g > 0)) {
    out["peak_photons"] = 0.0;
    out["peak_photons_at_offset"] = 0.0;
    return out;
  }
  const QsModel model(grid, crystal, cfg.pump, g);
  out["offset"] = {{"x_um", model.offset_x()}, {"t_fs", model.offset_t()}};
  out["carrier_phase_rad"] = model.carrier_phase();
  out["warnings"] = model.warnings();
  out["v2_per_pixel"] = model.gains().total_v2() / static_cast<double>(grid.size());
  out["peak_photons"] = model.mean_photons(model.offset_x(), model.offset_t());
  const RealMap photons = model.mean_photon_distribution();
  out["peak_photons_at_offset"] = local_mean(photons, grid, model.offset_x(), model.offset_t());
  out["pwp_matched_photons"] = std::sinh(g) * std::sinh(g);
  if (!cfg.pump.plane_wave) {
    if (!cfg.pump.chirped()) {
      const PeakWidths w = peak_widths(g, cfg.pump);
      out["widths"] = {{"corr_q", w.corr_q},
                       {"corr_omega", w.corr_omega},
                       {"coh_q", w.coh_q},
                       {"coh_omega", w.coh_omega}};
    }
    const PeakWidths s = sampled_peak_widths(model);
    out["widths_sampled"] = {{"corr_q", s.corr_q},
                             {"corr_omega", s.corr_omega},
                             {"coh_q", s.coh_q},
                             {"coh_omega", s.coh_omega}};
    out["halfwidth_t_fs"] = narrowed_width(g, cfg.pump.duration_fs);
    out["halfwidth_x_um"] = narrowed_width(g, cfg.pump.waist_um);
  }
  if (dir) {
    write_real_map(*dir / "mu_corr_abs", magnitude(model.mu(Envelope::corr)), grid, true,
                   "|mu_corr|, um fs");
    write_real_map(*dir / "mu_coh_abs", magnitude(model.mu(Envelope::coh)), grid, true,
                   "|mu_coh|, um fs");
    write_real_map(*dir / "mean_photons", photons, grid, false, "photons per direct pixel");
    RealMap v2(grid.size());
    for (std::size_t i = 0; i < v2.size(); ++i) v2[i] = std::norm(model.gains().v()[i]);
    write_real_map(*dir / "pwp_v2", v2, grid, true, "|V|^2");
    write_real_map(*dir / "mismatch", model.gains().mismatch(), grid, true, "D l_c");
    write_json(*dir / "summary.json", out);
  }
  return out;
}

int cmd_predict(const ExperimentConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  write_json(out / "config.json", artifact_config(cfg));
  std::ostringstream tsv;
  tsv << "# g\tdq_corr_inv_um\tdomega_corr_rad_fs\tdq_coh_inv_um\tdomega_coh_rad_fs\n";
  json all = json::array();
  for (double g : cfg.gains) {
    const fs::path dir = out / gain_label(g);
    json p = qs_prediction(cfg, g, &dir);
    for (const auto& w : p.value("warnings", json::array())) log << "warning: " << w.get<std::string>() << "\n";
    all.push_back(p);
  }
  // Dense width table for the analytic curves.
  if (!cfg.pump.plane_wave && !cfg.pump.chirped()) {
    for (double g : {0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0}) {
      const PeakWidths w = peak_widths(g, cfg.pump);
      tsv << g << "\t" << w.corr_q << "\t" << w.corr_omega << "\t" << w.coh_q << "\t"
          << w.coh_omega << "\n";
    }
  }
  write_text(out / "widths_table.tsv", tsv.str());
  write_json(out / "prediction.json", all);
  log << "predict: " << cfg.gains.size() << " gain value(s) -> " << out.string() << "\n";
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, {{"command", "predict"}, {"config", cfg.to_json()}, {"seconds", secs}});
  return kExitOk;
}

void save_accumulator(const fs::path& dir, const MomentAccumulator& acc) {
  const SimGrid& g = acc.grid();
  const std::size_t nb = acc.batch_count(), n = g.size();
  const std::vector<std::size_t> shape{nb, static_cast<std::size_t>(g.nx()),
                                       static_cast<std::size_t>(g.nt())};
  json batches = json::array();
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& gb = acc.gaussianity()[b];
    batches.push_back({{"count", acc.batch(b).count},
                       {"gauss_residual", {gb.residual[0], gb.residual[1], gb.residual[2]}},
                       {"gauss_predicted", {gb.predicted[0], gb.predicted[1], gb.predicted[2]}}});
  }
  const auto& opt = acc.options();
  write_json(dir / "batches.json",
             {{"batches", batches},
              {"grid", {g.nx(), g.nt(), g.spec().q_max, g.spec().omega_max}},
              {"region", {opt.region.q_lo, opt.region.q_hi, opt.region.omega_lo, opt.region.omega_hi}},
              {"correlations", opt.correlations},
              {"gaussianity", opt.gaussianity}});
  auto stack_real = [&](auto member, const char* name) {
    std::vector<double> all;
    all.reserve(nb * n);
    for (std::size_t b = 0; b < nb; ++b) {
      const RealMap& m = acc.batch(b).*member;
      all.insert(all.end(), m.begin(), m.end());
    }
    write_array(dir / name, all, shape, {{"layout_note", "per-batch sums, FFT order"}});
  };
  auto stack_cplx = [&](auto member, const char* name) {
    std::vector<cplx> all;
    all.reserve(nb * n);
    for (std::size_t b = 0; b < nb; ++b) {
      const std::vector<cplx>& m = acc.batch(b).*member;
      all.insert(all.end(), m.begin(), m.end());
    }
    write_array(dir / name, all.data(), all.size(), shape,
                {{"layout_note", "per-batch sums, centred displacement layout"}});
  };
  stack_real(&MomentSums::spectrum, "spectrum_sum");
  stack_real(&MomentSums::intensity, "intensity_sum");
  if (opt.correlations) {
    stack_cplx(&MomentSums::corr, "corr_sum");
    stack_cplx(&MomentSums::coh, "coh_sum");
  }
}

MomentAccumulator load_accumulator(const fs::path& dir) {
  const json meta = read_json(dir / "batches.json");
  const auto& gj = meta.at("grid");
  const SimGrid grid(GridSpec{gj[0].get<int>(), gj[1].get<int>(), gj[2].get<double>(),
                              gj[3].get<double>()});
  EstimatorOptions opt;
  const auto& rj = meta.at("region");
  opt.region = {rj[0].get<double>(), rj[1].get<double>(), rj[2].get<double>(), rj[3].get<double>()};
  opt.correlations = meta.at("correlations").get<bool>();
  opt.gaussianity = meta.at("gaussianity").get<bool>();
  MomentAccumulator acc(grid, opt);
  const std::size_t n = grid.size();
  const auto spectrum = read_real_array(dir / "spectrum_sum");
  const auto intensity = read_real_array(dir / "intensity_sum");
  std::vector<cplx> corr, coh;
  if (opt.correlations) {
    corr = read_complex_array(dir / "corr_sum");
    coh = read_complex_array(dir / "coh_sum");
  }
  const auto& batches = meta.at("batches");
  if (spectrum.size() != batches.size() * n)
    throw std::runtime_error(dir.string() + ": batch arrays do not match batches.json");
  for (std::size_t b = 0; b < batches.size(); ++b) {
    MomentSums s;
    s.count = batches[b].at("count").get<std::int64_t>();
    auto slice = [&](const auto& v) { return decltype(s.spectrum)(v.begin() + b * n, v.begin() + (b + 1) * n); };
    s.spectrum.assign(spectrum.begin() + b * n, spectrum.begin() + (b + 1) * n);
    s.intensity.assign(intensity.begin() + b * n, intensity.begin() + (b + 1) * n);
    (void)slice;
    if (opt.correlations) {
      s.corr.assign(corr.begin() + b * n, corr.begin() + (b + 1) * n);
      s.coh.assign(coh.begin() + b * n, coh.begin() + (b + 1) * n);
    }
    GaussianityBatch gb;
    for (int k = 0; k < kProbeShifts; ++k) {
      gb.residual[k] = batches[b].at("gauss_residual")[k].get<double>();
      gb.predicted[k] = batches[b].at("gauss_predicted")[k].get<double>();
    }
    acc.add_batch(std::move(s), gb);
  }
  return acc;
}

namespace {

// Scalar observables of one finalized moment set.
struct Observables {
  WidthEstimate psi, g1;
  double ratio_q = 0, ratio_omega = 0;
  double centroid_x = 0, centroid_t = 0;
  double width_x = 0, width_t = 0;
  double halfwidth_x = 0, halfwidth_t = 0;
  double peak_max = 0, peak_at_offset = 0;
  double matched = 0;
};

Observables observe(const FinalMoments& f, const SimGrid& grid, const ExperimentConfig& cfg,
                    double g, double xm, double tm, const RealMap& mismatch, bool widths) {
  Observables o;
  if (widths) {
    const PeakWidths pw = peak_widths(g, cfg.pump);
    o.psi = width_stddev(f.psi, grid, pw.corr_q, pw.corr_omega);
    o.g1 = width_stddev(f.g1, grid, pw.coh_q, pw.coh_omega);
    o.ratio_q = o.g1.q / o.psi.q;
    o.ratio_omega = o.g1.omega / o.psi.omega;
  }
  if (!cfg.pump.plane_wave) {
    const SpacetimeSummary s =
        spacetime_summary(f.intensity, grid, 3 * cfg.pump.waist_um, 3 * cfg.pump.duration_fs);
    o.centroid_x = s.centroid_x;
    o.centroid_t = s.centroid_t;
    o.width_x = s.width_x;
    o.width_t = s.width_t;
    o.peak_max = s.peak_photons;
    o.halfwidth_x = halfwidth_1e(f.intensity, grid, 0, s.centroid_x, s.centroid_t);
    o.halfwidth_t = halfwidth_1e(f.intensity, grid, 1, s.centroid_x, s.centroid_t);
  }
  o.peak_at_offset = local_mean(f.intensity, grid, xm, tm);
  double s0 = 0;
  int m = 0;
  for (std::size_t i = 0; i < mismatch.size(); ++i)
    if (std::abs(mismatch[i]) < 0.2) {
      s0 += f.spectrum[i];
      ++m;
    }
  o.matched = m ? s0 / m : 0.0;
  return o;
}

json with_error(double value, double error) { return {{"value", value}, {"error", error}}; }

}  // namespace

json analyze_moments(const MomentAccumulator& acc, const ExperimentConfig& cfg, double g,
                     const fs::path* dir) {
  const SimGrid& grid = acc.grid();
  const Crystal crystal(cfg.crystal);
  const WalkoffConstants wc = crystal.walkoff_constants();
  const double xm = 0.5 * wc.l_woff_um, tm = 0.5 * wc.tau_gvm_fs;
  const RealMap mismatch = mismatch_map(grid, crystal);
  const bool widths = acc.options().correlations && g > 0 && !cfg.pump.plane_wave &&
                      !cfg.pump.chirped();
  const FinalMoments f = finalize(acc);
  const Observables full = observe(f, grid, cfg, g, xm, tm, mismatch, widths);

  const std::size_t k = acc.batch_count();
  std::vector<Observables> loo(k);
  if (k >= 2)
    for (std::size_t b = 0; b < k; ++b)
      loo[b] = observe(finalize_without(acc, b), grid, cfg, g, xm, tm, mismatch, widths);
  auto jk = [&](auto get) {
    const ErrorBar e = jackknife(get(full), k, [&](std::size_t b) { return get(loo[b]); });
    return with_error(e.value, e.error);
  };

  json out;
  out["gain"] = g;
  out["realizations"] = acc.realizations();
  out["batches"] = k;
  out["region_pixels"] = acc.region_size();
  if (widths) {
    auto wjson = [&](auto sel) {
      const WidthEstimate& w = sel(full);
      return json{{"q", jk([&](const Observables& o) { return sel(o).q; })},
                  {"omega", jk([&](const Observables& o) { return sel(o).omega; })},
                  {"q_raw", w.q_raw},
                  {"omega_raw", w.omega_raw},
                  {"background", w.background},
                  {"clipped", w.clipped}};
    };
    out["widths"] = {{"psi", wjson([](const Observables& o) -> const WidthEstimate& { return o.psi; })},
                     {"g1", wjson([](const Observables& o) -> const WidthEstimate& { return o.g1; })}};
    out["ratio_coh_corr"] = {{"q", jk([](const Observables& o) { return o.ratio_q; })},
                             {"omega", jk([](const Observables& o) { return o.ratio_omega; })}};
  }
  if (!cfg.pump.plane_wave) {
    out["spacetime"] = {
        {"centroid_x_um", jk([](const Observables& o) { return o.centroid_x; })},
        {"centroid_t_fs", jk([](const Observables& o) { return o.centroid_t; })},
        {"width_x_um", jk([](const Observables& o) { return o.width_x; })},
        {"width_t_fs", jk([](const Observables& o) { return o.width_t; })},
        {"halfwidth_x_um", jk([](const Observables& o) { return o.halfwidth_x; })},
        {"halfwidth_t_fs", jk([](const Observables& o) { return o.halfwidth_t; })},
        {"peak_photons_max", full.peak_max}};
  }
  out["peak_photons_at_offset"] = jk([](const Observables& o) { return o.peak_at_offset; });
  out["spectrum_matched_photons"] = jk([](const Observables& o) { return o.matched; });
  if (cfg.pump.plane_wave) out["mismatch_profile"] = mismatch_profile(f.spectrum, mismatch, grid, g);
  if (acc.options().gaussianity && k >= 2) {
    const GaussianityReport r = gaussianity_report(acc);
    json shifts = json::array();
    const char* names[kProbeShifts] = {"zero", "one_q_pixel", "one_omega_pixel"};
    for (int d = 0; d < kProbeShifts; ++d)
      shifts.push_back({{"shift", names[d]},
                        {"residual", r.mean[d]},
                        {"error", r.error[d]},
                        {"predicted", r.predicted[d]}});
    out["gaussianity"] = {{"shifts", shifts}, {"consistent", r.consistent}};
  }
  if (dir) {
    write_real_map(*dir / "spectrum", f.spectrum, grid, true, "photons per Fourier pixel");
    write_real_map(*dir / "intensity", f.intensity, grid, false, "photons per direct pixel");
    if (acc.options().correlations) {
      json meta = displacement_axes(grid);
      meta["units"] = "photons per mode";
      write_array(*dir / "psi", f.psi.data(), f.psi.size(), shape2(grid), meta);
      write_array(*dir / "g1", f.g1.data(), f.g1.size(), shape2(grid), meta);
    }
    write_json(*dir / "summary.json", out);
  }
  return out;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  apply_fft_settings(cfg);
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  write_json(out / "config.json", artifact_config(cfg));
  const Crystal crystal(cfg.crystal);
  const SimGrid grid(cfg.grid);
  EstimatorOptions opt{cfg.region, cfg.correlations, cfg.gaussianity};
  json audit = json::object();
  for (double g : cfg.gains) {
    const fs::path dir = out / gain_label(g);
    fs::create_directories(dir);
    const Propagator prop(grid, crystal, cfg.pump, {g, cfg.n_steps, cfg.scheme});
    std::int64_t last_report = 0;
    const EnsembleResult res = run_ensemble(
        prop, opt, {cfg.seed, cfg.realizations, cfg.batch_size, cfg.workers},
        [&](std::int64_t done) {
          if (done - last_report >= std::max<std::int64_t>(1, cfg.realizations / 10) ||
              done == cfg.realizations) {
            log << "  g=" << g << ": " << done << "/" << cfg.realizations << " realizations\n";
            log.flush();
            last_report = done;
          }
        });
    save_accumulator(dir / "accumulator", res.moments);
    analyze_moments(res.moments, cfg, g, &dir);
    audit[gain_label(g)] = {{"max_manley_rowe_drift", res.max_drift},
                            {"max_pump_depletion", res.max_depletion},
                            {"max_sweeps", res.max_sweeps}};
    write_json(dir / "audit.json", audit[gain_label(g)]);
    if (res.max_depletion > 0.01)
      log << "warning: pump depletion " << res.max_depletion << " exceeds 1% at g=" << g << "\n";
  }
  if (!cfg.fft_wisdom.empty() && cfg.fft_planner == "measure") export_fft_wisdom(cfg.fft_wisdom);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out, {{"command", "simulate"},
                       {"config", cfg.to_json()},
                       {"seed", cfg.seed},
                       {"seconds", secs}});
  log << "simulate: done in " << std::fixed << std::setprecision(1) << secs << " s -> "
      << out.string() << "\n";
  return kExitOk;
}

int cmd_analyze(const fs::path& sim_dir, std::ostream& log) {
  const json cj = read_json(sim_dir / "config.json");
  const ExperimentConfig cfg = config_from_json(cj);
  for (double g : cfg.gains) {
    const fs::path dir = sim_dir / gain_label(g);
    const MomentAccumulator acc = load_accumulator(dir / "accumulator");
    analyze_moments(acc, cfg, g, &dir);
    log << "analyze: " << gain_label(g) << " (" << acc.realizations() << " realizations)\n";
  }
  json info = read_json(sim_dir / "manifest.json");
  info.erase("files");
  info["reanalyzed"] = true;
  write_manifest(sim_dir, info);
  return kExitOk;
}

namespace {

json row(double g, const std::string& quantity, double qs, double sim, double err, double dev,
         double tol, const std::string& status) {
  return {{"gain", g}, {"quantity", quantity}, {"qs", qs},        {"sim", sim},
          {"error", err}, {"deviation", dev},  {"tolerance", tol}, {"status", status}};
}

double rel(double sim, double ref) { return (sim - ref) / ref; }

}  // namespace

ComparisonReport compare_runs(const fs::path& pred_dir, const fs::path& sim_dir) {
  const ExperimentConfig pc = config_from_json(read_json(pred_dir / "config.json"));
  const ExperimentConfig sc = config_from_json(read_json(sim_dir / "config.json"));
  const json pj = pc.to_json(), sj = sc.to_json();
  for (const char* key : {"crystal", "pump", "grid"})
    if (pj[key] != sj[key])
      throw ComparisonError(std::string("prediction and simulation differ in '") + key + "'");

  ComparisonReport rep;
  const SimGrid grid(sc.grid);
  for (double g : sc.gains) {
    const fs::path pd = pred_dir / gain_label(g), sd = sim_dir / gain_label(g);
    if (!fs::exists(pd / "summary.json")) continue;
    const json p = read_json(pd / "summary.json");
    const json s = read_json(sd / "summary.json");
    const bool is_short = p.value("short_pump", false);
    const double wtol = is_short ? 0.25 : 0.15;
    auto add = [&](json r) {
      if (r["status"] == "FAIL") ++rep.binding_failures;
      rep.rows.push_back(std::move(r));
    };
    if (s.contains("widths") && p.contains("widths")) {
      const std::pair<const char*, const char*> pairs[] = {{"psi", "corr"}, {"g1", "coh"}};
      for (auto [sk, pk] : pairs)
        for (const char* axis : {"q", "omega"}) {
          const double qs = p["widths"][std::string(pk) + "_" + axis].get<double>();
          const double v = s["widths"][sk][axis]["value"].get<double>();
          const double e = s["widths"][sk][axis]["error"].get<double>();
          const double d = rel(v, qs);
          add(row(g, std::string("width_") + sk + "_" + axis, qs, v, e, d, wtol,
                  std::abs(d) <= wtol ? "PASS" : "FAIL"));
        }
    }
    if (s.contains("spacetime") && p.contains("offset")) {
      const double cx = s["spacetime"]["centroid_x_um"]["value"].get<double>();
      const double ct = s["spacetime"]["centroid_t_fs"]["value"].get<double>();
      const double dx = (cx - p["offset"]["x_um"].get<double>()) / sc.pump.waist_um;
      const double dt = (ct - p["offset"]["t_fs"].get<double>()) / sc.pump.duration_fs;
      add(row(g, "centroid_x_um", p["offset"]["x_um"], cx,
              s["spacetime"]["centroid_x_um"]["error"], dx, 0.15, std::abs(dx) <= 0.15 ? "PASS" : "FAIL"));
      add(row(g, "centroid_t_fs", p["offset"]["t_fs"], ct,
              s["spacetime"]["centroid_t_fs"]["error"], dt, 0.15, std::abs(dt) <= 0.15 ? "PASS" : "FAIL"));
    }
    if (g > 0 && !sc.pump.plane_wave) {
      const double qs = p["peak_photons_at_offset"].get<double>();
      const double v = s["peak_photons_at_offset"]["value"].get<double>();
      const double d = rel(v, qs);
      const bool ok = std::abs(d) <= 0.15;
      add(row(g, "peak_photons", qs, v, s["peak_photons_at_offset"]["error"], d, 0.15,
              ok ? "PASS" : (is_short ? "EXPECTED-FAIL" : "FAIL")));
      if (fs::exists(pd / "mean_photons.bin") && fs::exists(sd / "intensity.bin")) {
        const ProfileFit fit =
            fit_profile(read_real_array(sd / "intensity"), read_real_array(pd / "mean_photons"), 0.05);
        add(row(g, "profile_nrms", 0.0, fit.nrms, 0.0, fit.nrms, 0.10, "INFO"));
      }
    }
    if (sc.pump.plane_wave && g > 0) {
      const double qs = p["pwp_matched_photons"].get<double>();
      const double v = s["spectrum_matched_photons"]["value"].get<double>();
      const double e = s["spectrum_matched_photons"]["error"].get<double>();
      const double d = v - qs;
      add(row(g, "matched_photons", qs, v, e, d, 3 * e, std::abs(d) <= 3 * e ? "PASS" : "FAIL"));
    }
  }
  return rep;
}

namespace {

const char* kPlotWidths = R"py(import json
import sys

import matplotlib.pyplot as plt

rows = json.load(open(sys.argv[1] if len(sys.argv) > 1 else "report.json"))["rows"]
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for ax, axis, unit in ((axes[0], "omega", "rad/fs"), (axes[1], "q", "1/um")):
    for kind, colour in (("psi", "tab:blue"), ("g1", "tab:red")):
        sel = [r for r in rows if r["quantity"] == "width_%s_%s" % (kind, axis)]
        if not sel:
            continue
        g = [r["gain"] for r in sel]
        ax.plot(g, [r["qs"] for r in sel], "-", color=colour, label="QS %s" % kind)
        ax.errorbar(g, [r["sim"] for r in sel], yerr=[r["error"] for r in sel], fmt="o",
                    color=colour, label="simulation %s" % kind)
    ax.set_xlabel("g")
    ax.set_ylabel("width (%s)" % unit)
    ax.legend()
fig.tight_layout()
fig.savefig("widths.png", dpi=150)
)py";

const char* kPlotMaps = R"py(import json
import os
import sys

import matplotlib.pyplot as plt
import numpy as np


def load(base):
    meta = json.load(open(base + ".json"))
    dtype = np.complex128 if meta["dtype"] == "c128" else np.float64
    return np.fromfile(base + ".bin", dtype=dtype).reshape(meta["shape"]), meta


root = sys.argv[1] if len(sys.argv) > 1 else "."
for d in sorted(x for x in os.listdir(root) if x.startswith("g_")):
    base = os.path.join(root, d, "intensity")
    if not os.path.exists(base + ".bin"):
        continue
    img, meta = load(base)
    nx, nt = img.shape
    ext = [meta["t0"], meta["t0"] + nt * meta["dt"], meta["x0"], meta["x0"] + nx * meta["dx"]]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.imshow(img, origin="lower", extent=ext, aspect="auto")
    ax.set_xlabel("t (fs)")
    ax.set_ylabel("x (um)")
    ax.set_title(d)
    fig.savefig(os.path.join(root, d + "_intensity.png"), dpi=150)
    plt.close(fig)
)py";

}  // namespace

int cmd_compare(const fs::path& pred_dir, const fs::path& sim_dir, const fs::path& out_dir,
                std::ostream& log) {
  const ComparisonReport rep = compare_runs(pred_dir, sim_dir);
  fs::create_directories(out_dir);
  std::ostringstream tsv;
  tsv << "# g\tquantity\tqs\tsim\terror\tdeviation\ttolerance\tstatus\n";
  for (const auto& r : rep.rows) {
    tsv << r["gain"].get<double>() << "\t" << r["quantity"].get<std::string>() << "\t"
        << r["qs"].get<double>() << "\t" << r["sim"].get<double>() << "\t"
        << r["error"].get<double>() << "\t" << r["deviation"].get<double>() << "\t"
        << r["tolerance"].get<double>() << "\t" << r["status"].get<std::string>() << "\n";
  }
  write_text(out_dir / "report.tsv", tsv.str());
  write_json(out_dir / "report.json", {{"prediction", fs::absolute(pred_dir).string()},
                                       {"simulation", fs::absolute(sim_dir).string()},
                                       {"rows", rep.rows},
                                       {"binding_failures", rep.binding_failures}});
  write_text(out_dir / "plot_widths.py", kPlotWidths);
  write_text(out_dir / "plot_maps.py", kPlotMaps);
  log << tsv.str();
  log << (rep.binding_failures ? "compare: FAIL (" : "compare: PASS (") << rep.binding_failures
      << " binding failure(s))\n";
  return rep.binding_failures ? kExitComparisonFailed : kExitOk;
}

}  // namespace pdc
