#include "pdc/grid.hpp"

#include <cmath>

#include "pdc/errors.hpp"

namespace pdc {

void GridSpec::validate() const {
  if (n_x < 8 || n_x % 2) throw ConfigError("grid.n_x", "must be an even number >= 8");
  if (n_t < 8 || n_t % 2) throw ConfigError("grid.n_t", "must be an even number >= 8");
  if (!(q_max > 0)) throw ConfigError("grid.q_max_inv_um", "must be positive");
  if (!(omega_max > 0)) throw ConfigError("grid.omega_max_rad_fs", "must be positive");
}

GridSpec wide_grid() { return {512, 512, 0.3, 0.384}; }

SimGrid::SimGrid(GridSpec spec) : spec_(spec) {
  spec_.validate();
  dq_ = 2 * spec_.q_max / spec_.n_x;
  domega_ = 2 * spec_.omega_max / spec_.n_t;
  dx_ = 2 * kPi / (spec_.n_x * dq_);
  dt_ = 2 * kPi / (spec_.n_t * domega_);
}

namespace {
int nearest(double v, double step, int n) {
  const long s = std::lround(v / step);
  return SimGrid::wrap_index(static_cast<int>(s), n);
}
}  // namespace

int SimGrid::ix_of_q(double q) const { return nearest(q, dq_, nx()); }
int SimGrid::it_of_omega(double omega) const { return nearest(-omega, domega_, nt()); }
int SimGrid::ix_of_x(double x) const { return nearest(x, dx_, nx()); }
int SimGrid::it_of_t(double t) const { return nearest(t, dt_, nt()); }

bool SimGrid::operator==(const SimGrid& o) const {
  return spec_.n_x == o.spec_.n_x && spec_.n_t == o.spec_.n_t && spec_.q_max == o.spec_.q_max &&
         spec_.omega_max == o.spec_.omega_max;
}

std::vector<std::size_t> region_pixels(const SimGrid& grid, const SpectralRegion& r) {
  const double eq = 1e-9 * grid.dq(), eo = 1e-9 * grid.domega();
  std::vector<std::size_t> out;
  for (int ix = 0; ix < grid.nx(); ++ix) {
    const double q = grid.q(ix);
    if (q < r.q_lo - eq || q > r.q_hi + eq) continue;
    for (int it = 0; it < grid.nt(); ++it) {
      const double o = grid.omega(it);
      if (o < r.omega_lo - eo || o > r.omega_hi + eo) continue;
      out.push_back(grid.index(ix, it));
    }
  }
  return out;
}

namespace {
// Grid index holding the j-th smallest coordinate along an axis of length n.
// Direct axes and q ascend with the signed index; Omega descends with it.
int ascending_to_index(int j, int n, bool reversed) {
  const int s = reversed ? (n / 2 - 1 - j) : (j - n / 2);
  return SimGrid::wrap_index(s, n);
}
}  // namespace

template <class T, class Alloc>
std::vector<T> to_ascending(const std::vector<T, Alloc>& a, const SimGrid& grid, bool fourier) {
  std::vector<T> out(grid.size());
  for (int j0 = 0; j0 < grid.nx(); ++j0) {
    const int ix = ascending_to_index(j0, grid.nx(), false);
    for (int j1 = 0; j1 < grid.nt(); ++j1) {
      const int it = ascending_to_index(j1, grid.nt(), fourier);
      out[static_cast<std::size_t>(j0) * grid.nt() + j1] = a[grid.index(ix, it)];
    }
  }
  return out;
}

template std::vector<cplx> to_ascending(const Field&, const SimGrid&, bool);
template std::vector<double> to_ascending(const RealMap&, const SimGrid&, bool);
template std::vector<cplx> to_ascending(const std::vector<cplx>&, const SimGrid&, bool);

std::vector<double> ascending_axis0(const SimGrid& grid, bool fourier) {
  std::vector<double> v(grid.nx());
  for (int j = 0; j < grid.nx(); ++j) {
    const int ix = ascending_to_index(j, grid.nx(), false);
    v[j] = fourier ? grid.q(ix) : grid.x(ix);
  }
  return v;
}

std::vector<double> ascending_axis1(const SimGrid& grid, bool fourier) {
  std::vector<double> v(grid.nt());
  for (int j = 0; j < grid.nt(); ++j) {
    const int it = ascending_to_index(j, grid.nt(), fourier);
    v[j] = fourier ? grid.omega(it) : grid.t(it);
  }
  return v;
}

}  // namespace pdc
