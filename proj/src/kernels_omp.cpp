#include <algorithm>
#include <cstdint>

#include "kernels_detail.hpp"

namespace pdc::kernels::omp {

void apply_phase(std::span<cplx> field, std::span<const cplx> phase) {
  const auto n = static_cast<std::int64_t>(field.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) field[i] *= phase[i];
}

NonlinearStats nonlinear_step(std::span<cplx> signal, std::span<cplx> pump, double coupling_dz,
                              NonlinearScheme scheme) {
  const auto n = static_cast<std::int64_t>(signal.size());
  if (scheme == NonlinearScheme::explicit_midpoint) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      detail::explicit_midpoint(coupling_dz, signal[i], pump[i]);
    return {1, 0.0};
  }
  int sweeps = 0;
  double residual = 0;
#pragma omp parallel for schedule(static) reduction(max : sweeps, residual)
  for (std::int64_t i = 0; i < n; ++i) {
    const NonlinearStats p = detail::implicit_midpoint(coupling_dz, signal[i], pump[i]);
    sweeps = std::max(sweeps, p.sweeps);
    residual = std::max(residual, p.residual);
  }
  return {sweeps, residual};
}

void add_abs2(std::span<const cplx> field, std::span<double> sum) {
  const auto n = static_cast<std::int64_t>(field.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) sum[i] += std::norm(field[i]);
}

void correlate_direct(const SimGrid& grid, std::span<const cplx> field,
                      std::span<const std::size_t> region, int half_kx, int half_kt,
                      std::span<cplx> corr, std::span<cplx> coh) {
  const int nx = grid.nx(), nt = grid.nt();
  const int wx = 2 * half_kx + 1, wt = 2 * half_kt + 1;
#pragma omp parallel for schedule(dynamic, 4)
  for (int o = 0; o < wx * wt; ++o) {
    const int kx = o / wt - half_kx, kt = o % wt - half_kt;
    cplx c_corr = 0, c_coh = 0;
    for (std::size_t j : region) {
      const int sx = SimGrid::signed_index(static_cast<int>(j / nt), nx);
      const int st = SimGrid::signed_index(static_cast<int>(j % nt), nt);
      const cplx a = field[j];
      if (detail::in_range(kx - sx, nx) && detail::in_range(kt - st, nt))
        c_corr += a * field[grid.index(SimGrid::wrap_index(kx - sx, nx),
                                       SimGrid::wrap_index(kt - st, nt))];
      if (detail::in_range(sx + kx, nx) && detail::in_range(st + kt, nt))
        c_coh += std::conj(a) * field[grid.index(SimGrid::wrap_index(sx + kx, nx),
                                                 SimGrid::wrap_index(st + kt, nt))];
    }
    corr[o] = c_corr;
    coh[o] = c_coh;
  }
}

}  // namespace pdc::kernels::omp
