#include <algorithm>

#include "kernels_detail.hpp"

namespace pdc::kernels {

double photon_number(std::span<const cplx> field) {
  double n = 0;
  for (const cplx& a : field) n += std::norm(a);
  return n;
}

namespace serial {

void apply_phase(std::span<cplx> field, std::span<const cplx> phase) {
  for (std::size_t i = 0; i < field.size(); ++i) field[i] *= phase[i];
}

NonlinearStats nonlinear_step(std::span<cplx> signal, std::span<cplx> pump, double coupling_dz,
                              NonlinearScheme scheme) {
  const std::size_t n = signal.size();
  if (scheme == NonlinearScheme::explicit_midpoint) {
    for (std::size_t i = 0; i < n; ++i) detail::explicit_midpoint(coupling_dz, signal[i], pump[i]);
    return {1, 0.0};
  }
  NonlinearStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    const NonlinearStats p = detail::implicit_midpoint(coupling_dz, signal[i], pump[i]);
    stats.sweeps = std::max(stats.sweeps, p.sweeps);
    stats.residual = std::max(stats.residual, p.residual);
  }
  return stats;
}

void add_abs2(std::span<const cplx> field, std::span<double> sum) {
  for (std::size_t i = 0; i < field.size(); ++i) sum[i] += std::norm(field[i]);
}

void correlate_direct(const SimGrid& grid, std::span<const cplx> field,
                      std::span<const std::size_t> region, int half_kx, int half_kt,
                      std::span<cplx> corr, std::span<cplx> coh) {
  const int nx = grid.nx(), nt = grid.nt();
  const int wt = 2 * half_kt + 1;
  for (int kx = -half_kx; kx <= half_kx; ++kx) {
    for (int kt = -half_kt; kt <= half_kt; ++kt) {
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
      const std::size_t o = static_cast<std::size_t>(kx + half_kx) * wt + (kt + half_kt);
      corr[o] = c_corr;
      coh[o] = c_coh;
    }
  }
}

}  // namespace serial
}  // namespace pdc::kernels
