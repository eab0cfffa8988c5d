#include "pdc/fft.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>

namespace pdc {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
std::atomic<FftPlanner> g_planner{FftPlanner::estimate};
}  // namespace

void set_fft_planner(FftPlanner planner) { g_planner = planner; }
FftPlanner fft_planner() { return g_planner; }

bool import_fft_wisdom(const std::string& path) {
  std::lock_guard lock(planner_mutex());
  return fftw_import_wisdom_from_filename(path.c_str()) != 0;
}

bool export_fft_wisdom(const std::string& path) {
  std::lock_guard lock(planner_mutex());
  return fftw_export_wisdom_to_filename(path.c_str()) != 0;
}

Fft2D::Fft2D(int n0, int n1) : n0_(n0), n1_(n1) {
  std::lock_guard lock(planner_mutex());
  Field scratch(static_cast<std::size_t>(n0) * n1);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = g_planner == FftPlanner::measure ? FFTW_MEASURE : FFTW_ESTIMATE;
  fwd_ = fftw_plan_dft_2d(n0, n1, p, p, FFTW_FORWARD, flags);
  bwd_ = fftw_plan_dft_2d(n0, n1, p, p, FFTW_BACKWARD, flags);
  if (!fwd_ || !bwd_) throw std::runtime_error("FFTW plan creation failed");
}

Fft2D::~Fft2D() {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

void Fft2D::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(fwd_, p, p);
}

void Fft2D::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(bwd_, p, p);
}

}  // namespace pdc
