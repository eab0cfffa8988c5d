#pragma once

// Data-parallel inner loops of the simulator and estimators.
//
// Every kernel exists twice: `serial::` is the plain reference loop kept for
// testing, `omp::` the OpenMP work-shared version. Both are pointwise (or
// write disjoint outputs), so they agree bitwise; tests and the benchmark
// target compare them. Callers pick one through `Exec`.

#include <cstddef>
#include <span>

#include "pdc/grid.hpp"

namespace pdc::kernels {

enum class Exec { serial, parallel };

enum class NonlinearScheme {
  explicit_midpoint,
  implicit_midpoint,  // conserves N_s + 2 N_p to round-off
};

/// Result of one nonlinear sub-step.
struct NonlinearStats {
  int sweeps = 0;          // max fixed-point iterations over pixels (implicit scheme)
  double residual = 0.0;   // max final |change|
};

namespace serial {

/// field[i] *= phase[i]
void apply_phase(std::span<cplx> field, std::span<const cplx> phase);

/// One step of  ds/dz = c p s*,  dp/dz = -(c/2) s^2  (c dz = coupling_dz), pointwise.
NonlinearStats nonlinear_step(std::span<cplx> signal, std::span<cplx> pump, double coupling_dz,
                              NonlinearScheme scheme);

/// sum[i] += |field[i]|^2
void add_abs2(std::span<const cplx> field, std::span<double> sum);

/// Direct double-sum convolutions over the region R, unnormalised:
///   corr(k) = sum_{j in R} A(w_j) A(w_k - w_j)
///   coh(k)  = sum_{j in R} A*(w_j) A(w_j + w_k)
/// for displacement indices |kx| <= half_kx, |kt| <= half_kt. Outputs are
/// (2 half_kx + 1) x (2 half_kt + 1), row-major, centred. Partners falling
/// outside the grid are skipped.
void correlate_direct(const SimGrid& grid, std::span<const cplx> field,
                      std::span<const std::size_t> region, int half_kx, int half_kt,
                      std::span<cplx> corr, std::span<cplx> coh);

}  // namespace serial

namespace omp {
void apply_phase(std::span<cplx> field, std::span<const cplx> phase);
NonlinearStats nonlinear_step(std::span<cplx> signal, std::span<cplx> pump, double coupling_dz,
                              NonlinearScheme scheme);
void add_abs2(std::span<const cplx> field, std::span<double> sum);
void correlate_direct(const SimGrid& grid, std::span<const cplx> field,
                      std::span<const std::size_t> region, int half_kx, int half_kt,
                      std::span<cplx> corr, std::span<cplx> coh);
}  // namespace omp

inline void apply_phase(Exec e, std::span<cplx> f, std::span<const cplx> ph) {
  e == Exec::serial ? serial::apply_phase(f, ph) : omp::apply_phase(f, ph);
}
inline NonlinearStats nonlinear_step(Exec e, std::span<cplx> s, std::span<cplx> p, double c,
                                     NonlinearScheme scheme) {
  return e == Exec::serial ? serial::nonlinear_step(s, p, c, scheme)
                           : omp::nonlinear_step(s, p, c, scheme);
}
inline void add_abs2(Exec e, std::span<const cplx> f, std::span<double> sum) {
  e == Exec::serial ? serial::add_abs2(f, sum) : omp::add_abs2(f, sum);
}
inline void correlate_direct(Exec e, const SimGrid& g, std::span<const cplx> f,
                             std::span<const std::size_t> r, int hx, int ht,
                             std::span<cplx> corr, std::span<cplx> coh) {
  e == Exec::serial ? serial::correlate_direct(g, f, r, hx, ht, corr, coh)
                    : omp::correlate_direct(g, f, r, hx, ht, corr, coh);
}

/// Sum of |field|^2 in a fixed order (photon number for unitary fields).
double photon_number(std::span<const cplx> field);

}  // namespace pdc::kernels
