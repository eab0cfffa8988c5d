// Serial reference versus OpenMP kernels on a 256 x 256 grid.

#include <random>

#include <benchmark/benchmark.h>

#include "pdc/estimators.hpp"
#include "pdc/kernels.hpp"

namespace {

using pdc::cplx;
using pdc::kernels::Exec;

pdc::Field random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 0.5);
  pdc::Field f(n);
  for (auto& v : f) v = {d(rng), d(rng)};
  return f;
}

const pdc::SimGrid& grid() {
  static const pdc::SimGrid g(pdc::GridSpec{});
  return g;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void BM_ApplyPhase(benchmark::State& state) {
  auto f = random_field(grid().size(), 1);
  auto ph = random_field(grid().size(), 2);
  for (auto& p : ph) p /= std::abs(p);
  for (auto _ : state) {
    pdc::kernels::apply_phase(exec_of(state), f, ph);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_ApplyPhase)->Arg(0)->Arg(1)->ArgName("omp");

void BM_NonlinearStep(benchmark::State& state) {
  auto s = random_field(grid().size(), 3);
  auto p = random_field(grid().size(), 4);
  for (auto _ : state) {
    pdc::kernels::nonlinear_step(exec_of(state), s, p, 1e-6,
                                 pdc::kernels::NonlinearScheme::explicit_midpoint);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(BM_NonlinearStep)->Arg(0)->Arg(1)->ArgName("omp");

void BM_CorrelateDirect(benchmark::State& state) {
  const auto f = random_field(grid().size(), 5);
  const auto region = pdc::region_pixels(grid(), pdc::SpectralRegion{});
  const int h = 6;
  std::vector<cplx> corr((2 * h + 1) * (2 * h + 1)), coh(corr.size());
  for (auto _ : state) {
    pdc::kernels::correlate_direct(exec_of(state), grid(), f, region, h, h, corr, coh);
    benchmark::DoNotOptimize(corr.data());
  }
}
BENCHMARK(BM_CorrelateDirect)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond);

void BM_CorrelateFft(benchmark::State& state) {
  const auto f = random_field(grid().size(), 6);
  const auto region = pdc::region_pixels(grid(), pdc::SpectralRegion{});
  std::vector<cplx> corr, coh;
  for (auto _ : state) {
    pdc::correlate_fft(grid(), f, region, corr, coh);
    benchmark::DoNotOptimize(corr.data());
  }
}
BENCHMARK(BM_CorrelateFft)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
