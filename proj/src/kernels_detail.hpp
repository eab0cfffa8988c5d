#pragma once

// Per-pixel arithmetic shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>

#include "pdc/kernels.hpp"

namespace pdc::kernels::detail {

inline constexpr int kMaxSweeps = 60;
inline constexpr double kSweepTolerance = 1e-15;

// s1 = s0 + h p conj(s),  p1 = p0 - (h/2) s^2  evaluated at (s, p).
inline void rhs_update(double h, double s0r, double s0i, double p0r, double p0i, double sr,
                       double si, double pr, double pi, double& s1r, double& s1i, double& p1r,
                       double& p1i) {
  s1r = s0r + h * (pr * sr + pi * si);
  s1i = s0i + h * (pi * sr - pr * si);
  p1r = p0r - 0.5 * h * (sr * sr - si * si);
  p1i = p0i - h * (sr * si);
}

inline void explicit_midpoint(double h, cplx& s, cplx& p) {
  const double s0r = s.real(), s0i = s.imag(), p0r = p.real(), p0i = p.imag();
  double smr, smi, pmr, pmi;
  rhs_update(0.5 * h, s0r, s0i, p0r, p0i, s0r, s0i, p0r, p0i, smr, smi, pmr, pmi);
  double s1r, s1i, p1r, p1i;
  rhs_update(h, s0r, s0i, p0r, p0i, smr, smi, pmr, pmi, s1r, s1i, p1r, p1i);
  s = {s1r, s1i};
  p = {p1r, p1i};
}

// One fixed-point update of the implicit midpoint rule for a single pixel.
// Returns the L1 change of the iterate.
inline double implicit_sweep(double h, const cplx& s0, const cplx& p0, cplx& s, cplx& p) {
  const double smr = 0.5 * (s0.real() + s.real()), smi = 0.5 * (s0.imag() + s.imag());
  const double pmr = 0.5 * (p0.real() + p.real()), pmi = 0.5 * (p0.imag() + p.imag());
  double s1r, s1i, p1r, p1i;
  rhs_update(h, s0.real(), s0.imag(), p0.real(), p0.imag(), smr, smi, pmr, pmi, s1r, s1i, p1r,
             p1i);
  const double change = std::abs(s1r - s.real()) + std::abs(s1i - s.imag()) +
                        std::abs(p1r - p.real()) + std::abs(p1i - p.imag());
  s = {s1r, s1i};
  p = {p1r, p1i};
  return change;
}

inline double l1(const cplx& a) { return std::abs(a.real()) + std::abs(a.imag()); }

// Implicit midpoint for one pixel: fixed-point iteration from the explicit
// midpoint guess until the update stalls at round-off.
inline NonlinearStats implicit_midpoint(double h, cplx& s, cplx& p) {
  const cplx s0 = s, p0 = p;
  explicit_midpoint(h, s, p);
  NonlinearStats st;
  for (st.sweeps = 1; st.sweeps <= kMaxSweeps; ++st.sweeps) {
    st.residual = implicit_sweep(h, s0, p0, s, p);
    if (st.residual <= kSweepTolerance * (l1(s) + l1(p))) break;
  }
  st.sweeps = std::min(st.sweeps, kMaxSweeps);
  return st;
}

inline bool in_range(int s, int n) { return s >= -n / 2 && s < n / 2; }

}  // namespace pdc::kernels::detail
