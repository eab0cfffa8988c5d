#include <doctest.h>

#include <cmath>
#include <random>

#include "pdc/errors.hpp"
#include "pdc/estimators.hpp"
#include "pdc/wigner_sim.hpp"

using namespace pdc;

namespace {
const SimGrid& grid32() {
  static const SimGrid g(GridSpec{32, 32, 0.1, 0.1});
  return g;
}
EstimatorOptions small_options() { return {{-0.05, 0.05, 0.0, 0.06}, true, true}; }
}  // namespace

TEST_CASE("single-mode field: moments and ordering correction") {
  const SimGrid& g = grid32();
  Correlator c(g, small_options());
  const int ix = 3, it = SimGrid::wrap_index(-4, g.nt());  // q > 0, Omega > 0, inside the region
  const cplx alpha(2.0, -1.0);
  Field f(g.size(), cplx(0));
  f[g.index(ix, it)] = alpha;
  MomentSums s;
  c.accumulate(f, s, nullptr);
  const double m = static_cast<double>(c.region().size());
  const FinalMoments fm = finalize(s, g);
  CHECK(fm.spectrum[g.index(ix, it)] == doctest::Approx(std::norm(alpha) - 0.5));
  CHECK(fm.spectrum[g.index(0, 0)] == doctest::Approx(-0.5));
  for (double v : fm.intensity) CHECK(v == doctest::Approx(std::norm(alpha) / g.size() - 0.5));
  CHECK(std::abs(fm.psi[centred_index(g, 2 * 3, -2 * 4)] - alpha * alpha / m) < 1e-14);
  CHECK(std::abs(fm.g1[centred_index(g, 0, 0)] - (std::norm(alpha) / m - 0.5)) < 1e-14);
  CHECK(std::abs(fm.psi[centred_index(g, 0, 0)]) < 1e-14);
}

TEST_CASE("vacuum input gives zero normal-ordered moments") {
  const SimGrid& g = grid32();
  MomentAccumulator acc(g, small_options());
  Correlator c(g, small_options());
  for (int b = 0; b < 8; ++b) {
    MomentSums s;
    GaussianitySums gs;
    for (int r = 0; r < 250; ++r) c.accumulate(sample_vacuum(g, 9, b * 250 + r), s, &gs);
    acc.add_batch(std::move(s), gaussianity_batch(gs));
  }
  const FinalMoments f = finalize(acc);
  double spec = 0, inten = 0;
  for (double v : f.spectrum) spec += v;
  for (double v : f.intensity) inten += v;
  CHECK(std::abs(spec / g.size()) < 0.01);
  CHECK(std::abs(inten / g.size()) < 0.01);
  CHECK(std::abs(f.g1[centred_index(g, 0, 0)]) < 0.01);
  CHECK(std::abs(f.psi[centred_index(g, 0, 0)]) < 0.01);
  CHECK(gaussianity_report(acc).consistent);
}

TEST_CASE("Gaussianity probe flags a non-Gaussian ensemble") {
  // Fixed-amplitude modes with random phases: G1 != 0 but the intensity does not fluctuate.
  const SimGrid& g = grid32();
  MomentAccumulator acc(g, small_options());
  Correlator c(g, small_options());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ph(0, 2 * kPi);
  for (int b = 0; b < 6; ++b) {
    MomentSums s;
    GaussianitySums gs;
    for (int r = 0; r < 40; ++r) {
      Field f(g.size());
      for (auto& v : f) v = std::polar(1.0, ph(rng));
      c.accumulate(f, s, &gs);
    }
    acc.add_batch(std::move(s), gaussianity_batch(gs));
  }
  const GaussianityReport rep = gaussianity_report(acc);
  CHECK_FALSE(rep.consistent);
}

TEST_CASE("jackknife of a mean is the standard error") {
  const std::vector<double> x{1.0, 4.0, 2.5, 3.0, 7.0, 0.5};
  const double k = static_cast<double>(x.size());
  double mean = 0;
  for (double v : x) mean += v;
  mean /= k;
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const ErrorBar e = jackknife(mean, x.size(), [&](std::size_t b) { return (mean * k - x[b]) / (k - 1); });
  CHECK(e.value == doctest::Approx(mean));
  CHECK(e.error == doctest::Approx(std::sqrt(ss / (k - 1) / k)));
  CHECK(jackknife(1.0, 1, [](std::size_t) { return 0.0; }).error == 0.0);
}

TEST_CASE("width estimator recovers a Gaussian peak over a flat floor") {
  const SimGrid g(GridSpec{256, 256, 0.15, 0.192});
  const double sq = 0.006, so = 0.008;
  std::vector<cplx> peak(g.size());
  for (int kx = -128; kx < 128; ++kx)
    for (int kt = -128; kt < 128; ++kt) {
      const double q = kx * g.dq(), o = kt * g.domega();
      peak[centred_index(g, kx, kt)] =
          std::polar(std::exp(-q * q / (2 * sq * sq) - o * o / (2 * so * so)) + 0.02, 0.3 * kx);
    }
  const WidthEstimate w = width_stddev(peak, g, sq, so);
  CHECK(w.q == doctest::Approx(sq).epsilon(0.01));
  CHECK(w.omega == doctest::Approx(so).epsilon(0.01));
  CHECK(w.background == doctest::Approx(0.02).epsilon(1e-6));
  CHECK(w.q_raw > w.q);
  CHECK_FALSE(w.clipped);
}

TEST_CASE("space-time summaries") {
  const SimGrid g(GridSpec{128, 128, 0.15, 0.192});
  const double x0 = -60, t0 = -90, wx = 250, wt = 300;
  RealMap map(g.size());
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int it = 0; it < g.nt(); ++it) {
      const double u = (g.x(ix) - x0) / wx, v = (g.t(it) - t0) / wt;
      map[g.index(ix, it)] = 5 * std::exp(-u * u - v * v);
    }
  const SpacetimeSummary s = spacetime_summary(map, g, 3 * wx, 3 * wt);
  CHECK(s.centroid_x == doctest::Approx(x0).epsilon(0.01));
  CHECK(s.centroid_t == doctest::Approx(t0).epsilon(0.01));
  CHECK(s.width_x == doctest::Approx(wx / std::sqrt(2.0)).epsilon(0.01));
  CHECK(s.width_t == doctest::Approx(wt / std::sqrt(2.0)).epsilon(0.01));
  CHECK(local_mean(map, g, 0, 0, 0) == doctest::Approx(map[0]));
  RealMap twice = map;
  for (auto& v : twice) v *= 2;
  const ProfileFit fit = fit_profile(twice, map, 0.05);
  CHECK(fit.scale == doctest::Approx(2.0));
  CHECK(fit.nrms < 1e-12);
  CHECK(fit.pixels > 0);
}

TEST_CASE("accumulator merge and leave-one-out") {
  const SimGrid& g = grid32();
  MomentAccumulator a(g, small_options()), b(g, small_options());
  Correlator c(g, small_options());
  for (int k = 0; k < 3; ++k) {
    MomentSums s;
    c.accumulate(sample_vacuum(g, 1, k), s, nullptr);
    (k < 2 ? a : b).add_batch(std::move(s));
  }
  a.merge(b);
  CHECK(a.batch_count() == 3);
  CHECK(a.realizations() == 3);
  const FinalMoments without = finalize_without(a, 2);
  MomentSums first = a.batch(0);
  first.add(a.batch(1));
  const FinalMoments direct = finalize(first, g);
  CHECK(without.spectrum[5] == doctest::Approx(direct.spectrum[5]).epsilon(1e-12));
  MomentAccumulator other(SimGrid(GridSpec{16, 16, 0.1, 0.1}), small_options());
  CHECK_THROWS_AS(a.merge(other), ComparisonError);
}
