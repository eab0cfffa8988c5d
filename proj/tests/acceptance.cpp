// Acceptance harness: one PASS/FAIL line per criterion.
//
//   pdc_acceptance [--only N] [--cache DIR] [--prepare]
//
// Heavy ensembles run through the same predict/simulate/compare pipeline as
// the CLI and are cached under DIR (reused when the stored config matches).
// --prepare only fills the cache.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "pdc/commands.hpp"
#include "pdc/errors.hpp"
#include "pdc/kernels.hpp"
#include "pdc/qs_model.hpp"
#include "pdc/wigner_sim.hpp"

using namespace pdc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[2048];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path g_cache;

// Named ensemble runs shared by the criteria.
json run_doc(const std::string& name) {
  const json sim_planner = {{"fft_planner", "measure"},
                            {"fft_wisdom", (g_cache / "fftw.wisdom").string()},
                            {"seed", 20240601}};
  json doc;
  if (name == "long") {
    doc = {{"preset", "long-pump"}, {"gains", {0.5, 1.0, 3.0, 7.0}}, {"simulation", {{"realizations", 500}}}};
  } else if (name == "weak") {
    // The width ratio at low gain sits on a small photon number; more statistics.
    doc = {{"preset", "long-pump"}, {"gains", {0.5}}, {"simulation", {{"realizations", 2000}}}};
  } else if (name == "peak") {
    doc = {{"preset", "wide-grid"},
           {"gains", {1.0, 3.0, 7.0}},
           {"analysis", {{"correlations", false}, {"gaussianity", false}}},
           {"simulation", {{"realizations", 200}}}};
  } else if (name == "short") {
    doc = {{"preset", "short-pump"}, {"gains", {1.0, 3.0}}, {"simulation", {{"realizations", 300}}}};
  } else if (name == "thin") {
    doc = {{"preset", "thin-crystal"}, {"gains", {3.0}}, {"simulation", {{"realizations", 4000}}}};
  } else if (name == "pwp") {
    doc = {{"preset", "plane-wave"}, {"gains", {2.0}}, {"simulation", {{"realizations", 200}}}};
  } else if (name == "vacuum") {
    doc = {{"preset", "long-pump"}, {"gains", {0.0}}, {"simulation", {{"realizations", 64}}}};
  } else {
    throw std::logic_error("unknown run " + name);
  }
  doc["simulation"].update(sim_planner);
  return doc;
}

const std::vector<std::string> kRuns{"long", "weak", "peak", "short", "thin", "pwp", "vacuum"};

// Runs predict + simulate + compare for `name` unless cached; returns its directory.
fs::path ensure(const std::string& name) {
  const fs::path dir = g_cache / name;
  json doc = run_doc(name);
  doc["output_dir"] = (dir / "sim").string();
  const ExperimentConfig sc = config_from_json(doc);
  json want = sc.to_json();
  want["simulation"].erase("workers");
  want.erase("output_dir");
  if (fs::exists(dir / "sim" / "manifest.json") && fs::exists(dir / "pred" / "manifest.json")) {
    json have = read_json(dir / "sim" / "config.json");
    have.erase("output_dir");
    if (have == want) return dir;
  }
  std::cerr << "[prepare] " << name << ": running ensemble\n";
  fs::remove_all(dir);
  ExperimentConfig pc = sc;
  pc.output_dir = (dir / "pred").string();
  std::ostringstream quiet;
  cmd_predict(pc, quiet);
  cmd_simulate(sc, std::cerr);
  cmd_compare(dir / "pred", dir / "sim", dir / "cmp", quiet);
  return dir;
}

json sim_summary(const std::string& run, double g) {
  return read_json(ensure(run) / "sim" / gain_label(g) / "summary.json");
}
json pred_summary(const std::string& run, double g) {
  return read_json(ensure(run) / "pred" / gain_label(g) / "summary.json");
}
ExperimentConfig run_config(const std::string& run) {
  return config_from_json(read_json(ensure(run) / "sim" / "config.json"));
}

double rel(double a, double b) { return (a - b) / b; }

// 1. Dispersion constants of the BBO preset.
Outcome c1() {
  const CrystalParams p = bbo_515_type1();
  const WalkoffConstants w = walkoff_constants(p);
  const double theta = p.cut_angle_rad * 180 / kPi;
  const double rho = w.rho_p_rad * 180 / kPi;
  const bool ok_tau = std::abs(rel(w.tau_gvm_fs, -185.6)) <= 0.005;
  const bool ok_l = std::abs(rel(w.l_woff_um, -113.0)) <= 0.01;
  const bool ok_rho = std::abs(rho - (-3.2)) <= 0.1;
  const bool ok_theta = std::abs(theta - 23.29) <= 0.05;
  return {ok_tau && ok_l && ok_rho && ok_theta,
          fmt("tau_GVM %.2f fs vs -185.6 (%+.2f%%, tol 0.5%%) %s; l_WOFF %.2f um vs -113 (%+.2f%%) %s; "
              "rho_p %.4f deg vs -3.2 %s; theta_c %.4f deg vs 23.29 %s",
              w.tau_gvm_fs, 100 * rel(w.tau_gvm_fs, -185.6), ok_tau ? "ok" : "OUT",
              w.l_woff_um, 100 * rel(w.l_woff_um, -113.0), ok_l ? "ok" : "OUT", rho,
              ok_rho ? "ok" : "OUT", theta, ok_theta ? "ok" : "OUT")};
}

// 2. QS width curves: limits and sampled peaks.
Outcome c2() {
  PumpProfile pump;
  const double dp = 1.0 / pump.duration_fs;
  const PeakWidths lo = peak_widths(1e-4, pump), hi = peak_widths(7.0, pump);
  double worst_lim = 0;
  worst_lim = std::max(worst_lim, std::abs(rel(lo.corr_omega, std::sqrt(2.0) * dp)));
  worst_lim = std::max(worst_lim, std::abs(rel(lo.coh_omega, 2.0 * dp)));
  worst_lim = std::max(worst_lim, std::abs(rel(hi.corr_omega, std::sqrt(28.0) * dp)));
  worst_lim = std::max(worst_lim, std::abs(rel(hi.coh_omega, std::sqrt(28.0) * dp)));
  const Crystal crystal(bbo_515_type1());
  const SimGrid grid(GridSpec{});
  double worst_s = 0;
  for (double g : {0.1, 1.0, 3.0, 7.0}) {
    const QsModel m(grid, crystal, pump, g);
    const PeakWidths a = peak_widths(g, pump), s = sampled_peak_widths(m);
    for (auto [x, y] : {std::pair{s.corr_q, a.corr_q}, {s.corr_omega, a.corr_omega},
                        {s.coh_q, a.coh_q}, {s.coh_omega, a.coh_omega}})
      worst_s = std::max(worst_s, std::abs(rel(x, y)));
  }
  return {worst_lim <= 0.01 && worst_s <= 0.005,
          fmt("limits g->0 and g=7 worst %.2e (tol 1e-2); sampled |mu| widths g={0.1,1,3,7} "
              "worst %.2e (tol 5e-3)",
              worst_lim, worst_s)};
}

struct WidthCheck {
  double worst = 0;
  std::string rows;
};

WidthCheck width_rows(const std::string& run, std::initializer_list<double> gains) {
  const ExperimentConfig cfg = run_config(run);
  WidthCheck w;
  for (double g : gains) {
    const json s = sim_summary(run, g);
    const PeakWidths p = peak_widths(g, cfg.pump);
    const double d[4] = {rel(s["widths"]["psi"]["omega"]["value"], p.corr_omega),
                         rel(s["widths"]["psi"]["q"]["value"], p.corr_q),
                         rel(s["widths"]["g1"]["omega"]["value"], p.coh_omega),
                         rel(s["widths"]["g1"]["q"]["value"], p.coh_q)};
    for (double x : d) w.worst = std::max(w.worst, std::abs(x));
    w.rows += fmt(" g=%g[%+.1f %+.1f %+.1f %+.1f]%%", g, 100 * d[0], 100 * d[1], 100 * d[2], 100 * d[3]);
  }
  return w;
}

// 3. Long-pump widths and the coh/corr bifurcation.
Outcome c3() {
  const WidthCheck w = width_rows("long", {1.0, 3.0, 7.0});
  const json a = sim_summary("weak", 0.5), b = sim_summary("long", 7.0);
  double zmin = 1e300;
  std::string zs;
  for (const char* axis : {"omega", "q"}) {
    const double r1 = a["ratio_coh_corr"][axis]["value"], e1 = a["ratio_coh_corr"][axis]["error"];
    const double r2 = b["ratio_coh_corr"][axis]["value"], e2 = b["ratio_coh_corr"][axis]["error"];
    const double z = (r1 - r2) / std::hypot(e1, e2);
    zmin = std::min(zmin, z);
    zs += fmt(" %s: %.3f+-%.3f vs %.3f+-%.3f (z=%.1f)", axis, r1, e1, r2, e2, z);
  }
  return {w.worst <= 0.15 && zmin >= 3.0,
          fmt("dev [psi_W psi_q g1_W g1_q]%s worst %.1f%% (tol 15%%); ratio g=0.5 (2000 realizations) vs 7:%s",
              w.rows.c_str(), 100 * w.worst, zs.c_str())};
}

// 4. Short pump, relaxed tolerance.
Outcome c4() {
  const WidthCheck w = width_rows("short", {1.0, 3.0});
  return {w.worst <= 0.25,
          fmt("160 fs pump dev [psi_W psi_q g1_W g1_q]%s worst %.1f%% (tol 25%%)", w.rows.c_str(),
              100 * w.worst)};
}

// 5. Narrowing, offset and profile shape at g = 7.
Outcome c5() {
  const ExperimentConfig cfg = run_config("long");
  const json s = sim_summary("long", 7.0);
  const json& st = s["spacetime"];
  const double ht = st["halfwidth_t_fs"]["value"];
  // Pump intensity 1/e half-width.
  const double pump_ht = cfg.pump.duration_fs / std::sqrt(2.0);
  const double ratio = ht / pump_ht;
  const double cx = st["centroid_x_um"]["value"], ct = st["centroid_t_fs"]["value"];
  const double dx = (cx - (-56.5)) / cfg.pump.waist_um, dt = (ct - (-92.8)) / cfg.pump.duration_fs;
  const fs::path dir = ensure("long");
  const ProfileFit fit = fit_profile(read_real_array(dir / "sim" / "g_7" / "intensity"),
                                     read_real_array(dir / "pred" / "g_7" / "mean_photons"), 0.05);
  const bool ok = ratio < 0.5 && std::abs(dx) <= 0.15 && std::abs(dt) <= 0.15 && fit.nrms < 0.10;
  return {ok, fmt("t half-width %.1f fs = %.3f x pump intensity half-width (<0.5; QS %.1f fs); "
                  "centroid (%.1f um, %.1f fs) offset (%+.3f, %+.3f) pump widths (tol 0.15); "
                  "profile NRMS %.3f over %zu px (tol 0.10)",
                  ht, ratio, narrowed_width(7.0, cfg.pump.duration_fs), cx, ct, dx, dt, fit.nrms,
                  fit.pixels)};
}

// 6. Peak photons at the offset; the short pump is reported, not graded.
Outcome c6() {
  // Graded on the wide 512x512 grid: the gain band runs off the desk grid, whose edge
  // modes lose partners to wrap-around while the QS sum still counts them.
  double worst = 0;
  std::string rows, desk;
  for (double g : {1.0, 3.0, 7.0}) {
    const json s = sim_summary("peak", g)["peak_photons_at_offset"];
    const double sim = s["value"], err = s["error"];
    const double qs = pred_summary("peak", g)["peak_photons_at_offset"];
    worst = std::max(worst, std::abs(rel(sim, qs)));
    rows += fmt(" g=%g %.4g+-%.2g vs %.4g (%+.1f%%)", g, sim, err, qs, 100 * rel(sim, qs));
    const double ds = sim_summary("long", g)["peak_photons_at_offset"]["value"];
    const double dq = pred_summary("long", g)["peak_photons_at_offset"];
    desk += fmt(" g=%g %+.1f%%", g, 100 * rel(ds, dq));
  }
  std::string short_rows;
  for (double g : {1.0, 3.0}) {
    const double sim = sim_summary("short", g)["peak_photons_at_offset"]["value"];
    const double qs = pred_summary("short", g)["peak_photons_at_offset"];
    short_rows += fmt(" g=%g %+.1f%%", g, 100 * rel(sim, qs));
  }
  return {worst <= 0.15, fmt("long pump, 512x512 grid, sim vs QS:%s worst %.1f%% (tol 15%%); "
                             "256x256 desk grid (info):%s; short pump (non-binding, QS "
                             "over-prediction expected):%s",
                             rows.c_str(), 100 * worst, desk.c_str(), short_rows.c_str())};
}

double field_distance(const Field& a, const Field& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

// 7. Integrator: invariant drift, convergence order, linear unitarity.
Outcome c7() {
  double drift = 0;
  const fs::path dir = ensure("long");
  for (double g : {0.5, 1.0, 3.0, 7.0})
    drift = std::max(drift, read_json(dir / "sim" / gain_label(g) / "audit.json")["max_manley_rowe_drift"].get<double>());

  const Crystal crystal(bbo_515_type1());
  const SimGrid grid(GridSpec{});
  const PumpProfile pump;
  const Field vac = sample_vacuum(grid, 5, 0);
  std::map<int, Field> out;
  for (int n : {50, 100, 200}) {
    const Propagator prop(grid, crystal, pump, {7.0, n});
    FieldState st = prop.initial_state(vac);
    prop.propagate(st);
    out[n] = st.signal;
  }
  const double order = std::log2(field_distance(out[50], out[100]) / field_distance(out[100], out[200]));

  const Propagator lin(grid, crystal, pump, {0.0, 200});
  FieldState st = lin.initial_state(vac);
  lin.propagate(st);
  double worst = 0;
  for (std::size_t i = 0; i < vac.size(); ++i)
    worst = std::max(worst, std::abs(std::norm(st.signal[i]) / std::norm(vac[i]) - 1.0));

  return {drift < 1e-6 && std::abs(order - 2.0) <= 0.2 && worst < 1e-12,
          fmt("max Manley-Rowe drift %.2e over all long-pump realizations at 200 steps (<1e-6); "
              "self-convergence order %.3f at g=7, N=50/100/200 (2+-0.2); chi=0 per-pixel |a|^2 "
              "change %.1e (<1e-12)",
              drift, order, worst)};
}

// 8. Thin-crystal and plane-wave oracles.
Outcome c8() {
  // (a) thin crystal: sinh^2(g |alpha(xi)|) per direct pixel.
  const fs::path tdir = ensure("thin");
  const ExperimentConfig tc = run_config("thin");
  const Crystal thin(tc.crystal);
  const SimGrid tg(tc.grid);
  double dmax = 0;
  for (int ix = 0; ix < tg.nx(); ++ix)
    for (int it = 0; it < tg.nt(); ++it)
      dmax = std::max(dmax, std::abs(thin.phase_mismatch_pwp(tg.mode(ix, it))));
  const double g = 3.0;
  const MomentAccumulator acc = load_accumulator(tdir / "sim" / gain_label(g) / "accumulator");
  const FinalMoments f = finalize(acc);
  // Four-fold fold: the pump is even in x and t and the walk-off is far below a pixel.
  double worst = 0;
  std::size_t used = 0;
  for (int ix = 0; ix < tg.nx(); ++ix)
    for (int it = 0; it < tg.nt(); ++it) {
      const double pred = thin_crystal_moments(tc.pump, g, tg.x(ix), tg.t(it), tg.x(ix), tg.t(it)).g1;
      if (pred < 2.0) continue;
      const int mx = SimGrid::wrap_index(-SimGrid::signed_index(ix, tg.nx()), tg.nx());
      const int mt = SimGrid::wrap_index(-SimGrid::signed_index(it, tg.nt()), tg.nt());
      const double sim = 0.25 * (f.intensity[tg.index(ix, it)] + f.intensity[tg.index(mx, it)] +
                                 f.intensity[tg.index(ix, mt)] + f.intensity[tg.index(mx, mt)]);
      worst = std::max(worst, std::abs(rel(sim, pred)));
      ++used;
    }
  const bool ok_a = dmax < 0.05 && worst <= 0.05 && used > 0;

  // (b) plane wave: matched-pixel photons and the D = 0 ridge.
  const json s = sim_summary("pwp", 2.0);
  const double m = s["spectrum_matched_photons"]["value"], e = s["spectrum_matched_photons"]["error"];
  const double target = std::sinh(2.0) * std::sinh(2.0);
  const double ridge = s["mismatch_profile"]["peak_bin_center"];
  const bool ok_b = std::abs(m - target) <= 3 * e && std::abs(ridge) < 1e-12;
  return {ok_a && ok_b,
          fmt("(a) thin crystal max|D l_c| %.3f (<0.05), worst pointwise dev %.2f%% over %zu px "
              "with >= 2 photons, %lld realizations (tol 5%%); (b) plane wave g=2 matched photons "
              "%.3f+-%.3f vs sinh^2 g %.3f, spectrum peak in D l_c bin %.2f (want 0)",
              dmax, 100 * worst, used, static_cast<long long>(acc.realizations()), m, e, target,
              ridge)};
}

// 9. Estimators: FFT vs direct sums, vacuum, Gaussian moment identity.
Outcome c9() {
  const SimGrid g(GridSpec{32, 32, 0.1, 0.1});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  double worst = 0;
  const auto region = region_pixels(g, {-0.06, 0.06, -0.02, 0.08});
  const int h = 15;
  for (int trial = 0; trial < 5; ++trial) {
    Field f(g.size());
    for (auto& v : f) v = {nd(rng), nd(rng)};
    std::vector<cplx> dc((2 * h + 1) * (2 * h + 1)), dh(dc.size()), fc, fh;
    kernels::serial::correlate_direct(g, f, region, h, h, dc, dh);
    correlate_fft(g, f, region, fc, fh);
    const double m = static_cast<double>(region.size());
    double scale = 0, diff = 0;
    for (int kx = -h; kx <= h; ++kx)
      for (int kt = -h; kt <= h; ++kt) {
        const std::size_t o = static_cast<std::size_t>(kx + h) * (2 * h + 1) + (kt + h);
        const std::size_t c = centred_index(g, kx, kt);
        diff = std::max({diff, std::abs(fc[c] - dc[o] / m), std::abs(fh[c] - dh[o] / m)});
        scale = std::max({scale, std::abs(dc[o] / m), std::abs(dh[o] / m)});
      }
    worst = std::max(worst, diff / scale);
  }

  const MomentAccumulator vac = load_accumulator(ensure("vacuum") / "sim" / "g_0" / "accumulator");
  auto grid_mean = [](const RealMap& m) {
    double s = 0;
    for (double v : m) s += v;
    return s / static_cast<double>(m.size());
  };
  const FinalMoments fv = finalize(vac);
  const double spec = grid_mean(fv.spectrum), inten = grid_mean(fv.intensity);
  const std::size_t k = vac.batch_count();
  const ErrorBar es = jackknife(spec, k, [&](std::size_t b) { return grid_mean(finalize_without(vac, b).spectrum); });
  const ErrorBar ei = jackknife(inten, k, [&](std::size_t b) { return grid_mean(finalize_without(vac, b).intensity); });
  const bool ok_vac = std::abs(spec) <= 3 * es.error && std::abs(inten) <= 3 * ei.error;

  bool gauss_ok = true;
  std::string gs;
  for (double gain : {1.0, 3.0, 7.0}) {
    const json sj = sim_summary("long", gain);
    const json& gj = sj["gaussianity"];
    gauss_ok = gauss_ok && gj["consistent"].get<bool>();
    gs += fmt(" g=%g[", gain);
    for (const auto& sh : gj["shifts"])
      gs += fmt(" %.2g+-%.2g", sh["residual"].get<double>(), sh["error"].get<double>());
    gs += " ]";
  }
  return {worst <= 1e-10 && ok_vac && gauss_ok,
          fmt("FFT vs direct worst rel %.1e (<1e-10); vacuum spectrum %.1e+-%.1e, intensity "
              "%.1e+-%.1e photons/px; Gaussian identity residuals (0, dq, dOmega):%s",
              worst, spec, es.error, inten, ei.error, gs.c_str())};
}

// 10. Bitwise artifacts independent of the worker count.
Outcome c10() {
  const fs::path root = g_cache / "repro";
  fs::remove_all(root);
  json digests[3];
  for (int k = 0; k < 3; ++k) {
    json doc = {{"preset", "long-pump"},
                {"gains", {3.0}},
                {"simulation", {{"realizations", 8}, {"batch_size", 2}, {"seed", 77}, {"workers", k == 1 ? 2 : 1}}},
                {"output_dir", (root / ("run" + std::to_string(k))).string()}};
    std::ostringstream quiet;
    cmd_simulate(config_from_json(doc), quiet);
    digests[k] = digest_tree(root / ("run" + std::to_string(k)));
  }
  const bool same = digests[0] == digests[1] && digests[0] == digests[2];
  return {same, fmt("%zu artifact files; workers=1 vs workers=2 %s, repeated workers=1 run %s",
                    digests[0].size(), digests[0] == digests[1] ? "identical" : "DIFFER",
                    digests[0] == digests[2] ? "identical" : "DIFFER")};
}

const char* kTitles[] = {"",
                         "dispersion constants",
                         "QS width curves",
                         "long-pump widths vs QS",
                         "short-pump robustness",
                         "narrowing and offset",
                         "peak photon number",
                         "integrator physics",
                         "oracle limits",
                         "estimator correctness",
                         "reproducibility"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10"};
  int only = 0;
  bool prepare = false;
  std::string cache = "acceptance_cache";
  app.add_option("--only", only, "Evaluate a single criterion")->check(CLI::Range(1, 10));
  app.add_option("--cache", cache, "Directory for cached ensembles");
  app.add_flag("--prepare", prepare, "Only run the cached ensembles");
  CLI11_PARSE(app, argc, argv);
  g_cache = fs::absolute(cache);
  fs::create_directories(g_cache);
  set_fft_planner(FftPlanner::measure);
  import_fft_wisdom((g_cache / "fftw.wisdom").string());

  try {
    if (prepare) {
      for (const auto& r : kRuns) ensure(r);
      export_fft_wisdom((g_cache / "fftw.wisdom").string());
      std::cout << "prepared " << kRuns.size() << " ensembles in " << g_cache.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "prepare failed: " << e.what() << "\n";
    return 1;
  }

  const std::function<Outcome()> checks[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  int failures = 0;
  for (int n = 1; n <= 10; ++n) {
    if (only && n != only) continue;
    Outcome o;
    try {
      // Criterion 10 measures reproducibility of the default (estimate) planner.
      set_fft_planner(n == 10 ? FftPlanner::estimate : FftPlanner::measure);
      o = checks[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << " (" << kTitles[n]
              << "): " << o.detail << std::endl;
  }
  return failures ? 1 : 0;
}
