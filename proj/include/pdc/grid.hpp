#pragma once

// 2D+1 simulation grid: one transverse coordinate x and time t, conjugate to
// (q_x, Omega). Arrays are row-major [ix][it] in FFT order (index 0 is the
// origin, the upper half holds negative coordinates).
//
// Fourier convention: A(w) = N^{-1/2} sum_xi A(xi) exp(-i w.xi) with
// w.xi = q x - Omega t. A standard forward 2D DFT therefore yields
// q = k_x dq and Omega = -k_t dOmega; `omega(it)` carries that sign.

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

#include <fftw3.h>

#include "pdc/dispersion.hpp"

namespace pdc {

using cplx = std::complex<double>;

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

/// Complex field sampled on the grid (Fourier or direct space).
using Field = std::vector<cplx, FftwAllocator<cplx>>;
using RealMap = std::vector<double>;

struct GridSpec {
  int n_x = 256;
  int n_t = 256;
  double q_max = 0.15;       // 1/um, grid spans [-q_max, q_max)
  double omega_max = 0.192;  // rad/fs
  void validate() const;
};

/// Wide grid: 512 x 512, |q_x| < 0.3 1/um, |Omega| < 0.384 rad/fs.
GridSpec wide_grid();

class SimGrid {
 public:
  explicit SimGrid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.n_x; }
  int nt() const { return spec_.n_t; }
  std::size_t size() const { return static_cast<std::size_t>(nx()) * nt(); }
  double dq() const { return dq_; }
  double domega() const { return domega_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  double fourier_pixel() const { return dq_ * domega_; }
  double direct_pixel() const { return dx_ * dt_; }

  static int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }
  static int wrap_index(int s, int n) { return ((s % n) + n) % n; }

  double q(int ix) const { return signed_index(ix, nx()) * dq_; }
  double omega(int it) const { return -signed_index(it, nt()) * domega_; }
  double x(int ix) const { return signed_index(ix, nx()) * dx_; }
  double t(int it) const { return signed_index(it, nt()) * dt_; }
  SpectralMode mode(int ix, int it) const { return {q(ix), omega(it)}; }

  std::size_t index(int ix, int it) const {
    return static_cast<std::size_t>(ix) * nt() + it;
  }
  /// Index of the mode -w.
  std::size_t mirror(std::size_t idx) const {
    const int ix = static_cast<int>(idx / nt()), it = static_cast<int>(idx % nt());
    return index((nx() - ix) % nx(), (nt() - it) % nt());
  }

  /// Nearest grid indices of a Fourier coordinate / direct coordinate.
  int ix_of_q(double q) const;
  int it_of_omega(double omega) const;
  int ix_of_x(double x) const;
  int it_of_t(double t) const;

  bool operator==(const SimGrid& o) const;
  bool operator!=(const SimGrid& o) const { return !(*this == o); }

 private:
  GridSpec spec_;
  double dq_, domega_, dx_, dt_;
};

/// Rectangular averaging region in the Fourier plane (bounds inclusive).
struct SpectralRegion {
  double q_lo = -0.1, q_hi = 0.1;       // 1/um
  double omega_lo = 0.0, omega_hi = 0.12;  // rad/fs
};

/// Grid indices of the pixels inside `region`, ordered by (ix, it).
std::vector<std::size_t> region_pixels(const SimGrid& grid, const SpectralRegion& region);

/// Reorders an FFT-order array into ascending-coordinate order along both
/// axes (q or x ascending, then Omega or t ascending). `fourier` selects the
/// Omega sign convention for the second axis.
template <class T, class Alloc>
std::vector<T> to_ascending(const std::vector<T, Alloc>& a, const SimGrid& grid, bool fourier);

/// Ascending coordinate values along each axis matching `to_ascending`.
std::vector<double> ascending_axis0(const SimGrid& grid, bool fourier);
std::vector<double> ascending_axis1(const SimGrid& grid, bool fourier);

// Displacement arrays (estimator outputs) are stored centred: entry
// (kx + nx/2, kt + nt/2) is displacement index (kx, kt), kx,kt in [-n/2, n/2).
// Their physical displacement is (kx dq, -kt dOmega).
struct Displacement {
  int kx = 0, kt = 0;
};
inline std::size_t centred_index(const SimGrid& g, int kx, int kt) {
  return static_cast<std::size_t>(kx + g.nx() / 2) * g.nt() + (kt + g.nt() / 2);
}

}  // namespace pdc
