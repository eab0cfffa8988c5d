#pragma once

#include <fftw3.h>

#include <string>

#include "pdc/grid.hpp"

namespace pdc {

/// Planner rigor. `estimate` picks algorithms without timing, so results are
/// bitwise reproducible across processes. `measure` is ~3x faster but
/// timing-dependent: reproducible within one process, and across processes
/// only when the same wisdom file is imported first.
enum class FftPlanner { estimate, measure };

void set_fft_planner(FftPlanner planner);
FftPlanner fft_planner();
/// Returns false if the file is missing or unreadable.
bool import_fft_wisdom(const std::string& path);
bool export_fft_wisdom(const std::string& path);

/// In-place unnormalized 2D complex DFT of fixed shape, backed by FFTW.
///
/// `forward`/`backward` use the new-array interface and may be called
/// concurrently on distinct arrays allocated through FftwAllocator.
class Fft2D {
 public:
  Fft2D(int n0, int n1);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int n0() const { return n0_; }
  int n1() const { return n1_; }

  /// exp(-i 2 pi (k0 j0 / n0 + k1 j1 / n1))
  void forward(cplx* data) const;
  /// exp(+i ...), no 1/N factor.
  void backward(cplx* data) const;

 private:
  int n0_, n1_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace pdc
