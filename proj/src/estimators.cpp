#include "pdc/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "pdc/errors.hpp"

namespace pdc {

void MomentSums::resize(std::size_t n, bool correlations) {
  if (correlations) {
    corr.assign(n, 0.0);
    coh.assign(n, 0.0);
  }
  spectrum.assign(n, 0.0);
  intensity.assign(n, 0.0);
}

namespace {
template <class V>
void add_into(V& a, const V& b) {
  if (a.empty()) {
    a = b;
    return;
  }
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}
}  // namespace

void MomentSums::add(const MomentSums& o) {
  count += o.count;
  add_into(corr, o.corr);
  add_into(coh, o.coh);
  add_into(spectrum, o.spectrum);
  add_into(intensity, o.intensity);
}

void GaussianitySums::resize(std::size_t m) {
  count = 0;
  s_m.assign(m, 0);
  s_m2.assign(m, 0);
  s_y.assign(m, 0);
  for (int d = 0; d < 2; ++d) {
    n_m[d].assign(m, 0);
    n_mm[d].assign(m, 0);
    n_x[d].assign(m, 0);
    n_y[d].assign(m, 0);
  }
}

GaussianityBatch gaussianity_batch(const GaussianitySums& s) {
  GaussianityBatch out;
  const double b = static_cast<double>(s.count);
  const std::size_t m = s.s_m.size();
  if (s.count < 2 || m == 0) return out;
  // Unbiased estimates of |E x|^2 from a sample mean: |mean|^2 - var/B.
  auto sq_mean = [b](cplx sum, double sum_abs2) {
    const cplx mean = sum / b;
    const double var = (sum_abs2 - b * std::norm(mean)) / (b - 1);
    return std::norm(mean) - var / b;
  };
  for (std::size_t j = 0; j < m; ++j) {
    const double mbar = s.s_m[j] / b;
    const double var_m = (s.s_m2[j] - b * mbar * mbar) / (b - 1);
    const double lhs = var_m - mbar + 0.25;
    const double n2 = (mbar - 0.5) * (mbar - 0.5) - var_m / b;
    const double rhs = n2 + sq_mean(s.s_y[j], s.s_m2[j]);
    out.residual[0] += lhs - rhs;
    out.predicted[0] += rhs;
    for (int d = 0; d < 2; ++d) {
      const double nbar = s.n_m[d][j] / b;
      const double cov = (s.n_mm[d][j] - b * mbar * nbar) / (b - 1);
      const double r = sq_mean(s.n_x[d][j], s.n_mm[d][j]) + sq_mean(s.n_y[d][j], s.n_mm[d][j]);
      out.residual[d + 1] += cov - r;
      out.predicted[d + 1] += r;
    }
  }
  for (int k = 0; k < kProbeShifts; ++k) {
    out.residual[k] /= static_cast<double>(m);
    out.predicted[k] /= static_cast<double>(m);
  }
  return out;
}

namespace {

// Zero-padded (2 nx x 2 nt) transform correlation; partners outside the grid
// land on zeros, so the result equals the direct double sum.
void correlate_padded(const SimGrid& grid, const Fft2D& fft, const std::vector<std::size_t>& region,
                      const std::vector<std::size_t>& pad_index, const Field& field, Field& pa,
                      Field& pb, Field& pc, std::vector<cplx>& corr, std::vector<cplx>& coh) {
  std::fill(pa.begin(), pa.end(), cplx(0));
  std::fill(pb.begin(), pb.end(), cplx(0));
  for (std::size_t i = 0; i < field.size(); ++i) pa[pad_index[i]] = field[i];
  for (std::size_t j : region) pb[pad_index[j]] = field[j];
  fft.forward(pa.data());
  fft.forward(pb.data());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    pc[i] = pb[i] * pa[i];
    pb[i] = std::conj(pb[i]) * pa[i];
  }
  fft.backward(pc.data());
  fft.backward(pb.data());
  const double norm = 1.0 / (static_cast<double>(pa.size()) * static_cast<double>(region.size()));
  const int nx = grid.nx(), nt = grid.nt();
  for (int kx = -nx / 2; kx < nx / 2; ++kx)
    for (int kt = -nt / 2; kt < nt / 2; ++kt) {
      const std::size_t p = static_cast<std::size_t>(SimGrid::wrap_index(kx, 2 * nx)) * (2 * nt) +
                            SimGrid::wrap_index(kt, 2 * nt);
      const std::size_t c = centred_index(grid, kx, kt);
      corr[c] += pc[p] * norm;
      coh[c] += pb[p] * norm;
    }
}

std::vector<std::size_t> padded_indices(const SimGrid& grid) {
  std::vector<std::size_t> out(grid.size());
  const int nx = grid.nx(), nt = grid.nt();
  for (int ix = 0; ix < nx; ++ix)
    for (int it = 0; it < nt; ++it) {
      const int sx = SimGrid::signed_index(ix, nx), st = SimGrid::signed_index(it, nt);
      out[grid.index(ix, it)] = static_cast<std::size_t>(SimGrid::wrap_index(sx, 2 * nx)) * (2 * nt) +
                                SimGrid::wrap_index(st, 2 * nt);
    }
  return out;
}

}  // namespace

void correlate_fft(const SimGrid& grid, const Field& field, const std::vector<std::size_t>& region,
                   std::vector<cplx>& corr, std::vector<cplx>& coh) {
  if (field.size() != grid.size()) throw ComparisonError("field does not match the grid");
  Fft2D fft(2 * grid.nx(), 2 * grid.nt());
  Field pa(4 * grid.size()), pb(4 * grid.size()), pc(4 * grid.size());
  corr.assign(grid.size(), 0.0);
  coh.assign(grid.size(), 0.0);
  correlate_padded(grid, fft, region, padded_indices(grid), field, pa, pb, pc, corr, coh);
}

Correlator::Correlator(const SimGrid& grid, const EstimatorOptions& options)
    : grid_(grid), options_(options), region_(region_pixels(grid, options.region)) {
  if (region_.empty()) throw ConfigError("analysis.region", "contains no grid pixels");
  fft_ = std::make_unique<Fft2D>(grid.nx(), grid.nt());
  direct_.resize(grid.size());
  if (options_.correlations) {
    fft_pad_ = std::make_unique<Fft2D>(2 * grid.nx(), 2 * grid.nt());
    pad_a_.resize(4 * grid.size());
    pad_b_.resize(4 * grid.size());
    pad_c_.resize(4 * grid.size());
    pad_index_ = padded_indices(grid);
  }
  for (std::size_t j : region_) {
    const int ix = static_cast<int>(j / grid.nt()), it = static_cast<int>(j % grid.nt());
    neighbours_[0].push_back(grid.index((ix + 1) % grid.nx(), it));
    neighbours_[1].push_back(grid.index(ix, (it + 1) % grid.nt()));
  }
}

void Correlator::accumulate(const Field& field, MomentSums& sums, GaussianitySums* gauss) {
  if (field.size() != grid_.size()) throw ComparisonError("field does not match the grid");
  const std::size_t n = grid_.size();
  if (sums.spectrum.empty()) sums.resize(n, options_.correlations);
  sums.count += 1;
  kernels::serial::add_abs2(field, sums.spectrum);

  std::copy(field.begin(), field.end(), direct_.begin());
  fft_->backward(direct_.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) sums.intensity[i] += std::norm(direct_[i]) * inv_n;

  if (options_.correlations) {
    correlate_padded(grid_, *fft_pad_, region_, pad_index_, field, pad_a_, pad_b_, pad_c_,
                     sums.corr, sums.coh);
  }

  if (gauss && options_.gaussianity) {
    if (gauss->s_m.empty()) gauss->resize(region_.size());
    gauss->count += 1;
    for (std::size_t k = 0; k < region_.size(); ++k) {
      const cplx a = field[region_[k]];
      const double m = std::norm(a);
      gauss->s_m[k] += m;
      gauss->s_m2[k] += m * m;
      gauss->s_y[k] += a * a;
      for (int d = 0; d < 2; ++d) {
        const cplx b = field[neighbours_[d][k]];
        const double mb = std::norm(b);
        gauss->n_m[d][k] += mb;
        gauss->n_mm[d][k] += m * mb;
        gauss->n_x[d][k] += std::conj(a) * b;
        gauss->n_y[d][k] += a * b;
      }
    }
  }
}

MomentAccumulator::MomentAccumulator(const SimGrid& grid, EstimatorOptions options)
    : grid_(grid), options_(options), region_size_(region_pixels(grid, options.region).size()) {
  total_.resize(grid.size(), options.correlations);
}

void MomentAccumulator::add_batch(MomentSums batch, GaussianityBatch gauss) {
  total_.add(batch);
  batches_.push_back(std::move(batch));
  gauss_.push_back(gauss);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.grid_ != grid_ || other.region_size_ != region_size_)
    throw ComparisonError("accumulators built on different grids or regions");
  for (std::size_t b = 0; b < other.batches_.size(); ++b)
    add_batch(other.batches_[b], other.gauss_[b]);
}

FinalMoments finalize(const MomentSums& s, const SimGrid& grid) {
  if (s.count < 1) throw DomainError("no realizations to finalize");
  FinalMoments f;
  f.count = s.count;
  const double inv = 1.0 / static_cast<double>(s.count);
  f.psi.resize(s.corr.size());
  f.g1.resize(s.coh.size());
  for (std::size_t i = 0; i < s.corr.size(); ++i) f.psi[i] = s.corr[i] * inv;
  for (std::size_t i = 0; i < s.coh.size(); ++i) f.g1[i] = s.coh[i] * inv;
  if (!f.g1.empty()) f.g1[centred_index(grid, 0, 0)] -= 0.5;
  f.spectrum.resize(s.spectrum.size());
  f.intensity.resize(s.intensity.size());
  for (std::size_t i = 0; i < s.spectrum.size(); ++i) f.spectrum[i] = s.spectrum[i] * inv - 0.5;
  for (std::size_t i = 0; i < s.intensity.size(); ++i) f.intensity[i] = s.intensity[i] * inv - 0.5;
  return f;
}

FinalMoments finalize(const MomentAccumulator& acc) { return finalize(acc.total(), acc.grid()); }

FinalMoments finalize_without(const MomentAccumulator& acc, std::size_t b) {
  MomentSums s = acc.total();
  const MomentSums& x = acc.batch(b);
  s.count -= x.count;
  auto sub = [](auto& a, const auto& c) {
    for (std::size_t i = 0; i < c.size(); ++i) a[i] -= c[i];
  };
  sub(s.corr, x.corr);
  sub(s.coh, x.coh);
  sub(s.spectrum, x.spectrum);
  sub(s.intensity, x.intensity);
  return finalize(s, acc.grid());
}

namespace {
double median(std::vector<double> v) {
  if (v.empty()) return 0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}
}  // namespace

WidthEstimate width_stddev(const std::vector<cplx>& peak, const SimGrid& grid, double pred_q,
                           double pred_omega) {
  const int nx = grid.nx(), nt = grid.nt();
  if (peak.size() != grid.size()) throw ComparisonError("peak array does not match the grid");
  std::size_t imax = 0;
  for (std::size_t i = 1; i < peak.size(); ++i)
    if (std::abs(peak[i]) > std::abs(peak[imax])) imax = i;
  const int cx = static_cast<int>(imax / nt), ct = static_cast<int>(imax % nt);
  const int hx = std::max(1, static_cast<int>(std::lround(4 * pred_q / grid.dq())));
  const int ht = std::max(1, static_cast<int>(std::lround(4 * pred_omega / grid.domega())));

  WidthEstimate w;
  auto inside = [&](int ix, int it) { return ix >= 0 && ix < nx && it >= 0 && it < nt; };
  if (!inside(cx - hx, ct - ht) || !inside(cx + hx, ct + ht)) w.clipped = true;

  std::vector<double> ring;
  for (int dx = -2 * hx; dx <= 2 * hx; ++dx)
    for (int dt = -2 * ht; dt <= 2 * ht; ++dt) {
      if (std::abs(dx) <= hx && std::abs(dt) <= ht) continue;
      if (!inside(cx + dx, ct + dt)) continue;
      ring.push_back(std::abs(peak[static_cast<std::size_t>(cx + dx) * nt + (ct + dt)]));
    }
  w.background = median(std::move(ring));

  auto moments = [&](double bg, double& sq, double& so) {
    double s0 = 0, s1q = 0, s1o = 0, s2q = 0, s2o = 0;
    for (int dx = -hx; dx <= hx; ++dx)
      for (int dt = -ht; dt <= ht; ++dt) {
        if (!inside(cx + dx, ct + dt)) continue;
        const double v = std::abs(peak[static_cast<std::size_t>(cx + dx) * nt + (ct + dt)]) - bg;
        const double q = dx * grid.dq(), o = dt * grid.domega();
        s0 += v;
        s1q += v * q;
        s1o += v * o;
        s2q += v * q * q;
        s2o += v * o * o;
      }
    const double mq = s1q / s0, mo = s1o / s0;
    sq = std::sqrt(std::max(0.0, s2q / s0 - mq * mq));
    so = std::sqrt(std::max(0.0, s2o / s0 - mo * mo));
  };
  moments(0.0, w.q_raw, w.omega_raw);
  moments(w.background, w.q, w.omega);
  return w;
}

ErrorBar jackknife(double full, std::size_t k,
                   const std::function<double(std::size_t)>& without) {
  if (k < 2) return {full, 0.0};
  std::vector<double> est(k);
  double mean = 0;
  for (std::size_t b = 0; b < k; ++b) {
    est[b] = without(b);
    mean += est[b];
  }
  mean /= static_cast<double>(k);
  double ss = 0;
  for (double e : est) ss += (e - mean) * (e - mean);
  return {full, std::sqrt(ss * static_cast<double>(k - 1) / static_cast<double>(k))};
}

SpacetimeSummary spacetime_summary(const RealMap& map, const SimGrid& grid, double window_x,
                                   double window_t) {
  SpacetimeSummary s;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < map.size(); ++i)
    if (map[i] > map[imax]) imax = i;
  const int ix0 = static_cast<int>(imax / grid.nt()), it0 = static_cast<int>(imax % grid.nt());
  s.peak_photons = map[imax];
  s.peak_x = grid.x(ix0);
  s.peak_t = grid.t(it0);
  const int hx = static_cast<int>(window_x / grid.dx());
  const int ht = static_cast<int>(window_t / grid.dt());
  double s0 = 0, sx = 0, st = 0, sxx = 0, stt = 0;
  for (int dx = -hx; dx <= hx; ++dx)
    for (int dt = -ht; dt <= ht; ++dt) {
      const int ix = SimGrid::wrap_index(ix0 + dx, grid.nx());
      const int it = SimGrid::wrap_index(it0 + dt, grid.nt());
      const double v = map[grid.index(ix, it)];
      const double x = s.peak_x + dx * grid.dx(), t = s.peak_t + dt * grid.dt();
      s0 += v;
      sx += v * x;
      st += v * t;
      sxx += v * x * x;
      stt += v * t * t;
    }
  s.centroid_x = sx / s0;
  s.centroid_t = st / s0;
  s.width_x = std::sqrt(std::max(0.0, sxx / s0 - s.centroid_x * s.centroid_x));
  s.width_t = std::sqrt(std::max(0.0, stt / s0 - s.centroid_t * s.centroid_t));
  return s;
}

double local_mean(const RealMap& map, const SimGrid& grid, double x, double t, int r) {
  const int ix0 = grid.ix_of_x(x), it0 = grid.it_of_t(t);
  double sum = 0;
  for (int dx = -r; dx <= r; ++dx)
    for (int dt = -r; dt <= r; ++dt)
      sum += map[grid.index(SimGrid::wrap_index(ix0 + dx, grid.nx()),
                            SimGrid::wrap_index(it0 + dt, grid.nt()))];
  return sum / ((2 * r + 1) * (2 * r + 1));
}

ProfileFit fit_profile(const RealMap& sim, const RealMap& model, double threshold) {
  ProfileFit f;
  const double cut = threshold * *std::max_element(model.begin(), model.end());
  double sm = 0, mm = 0, ss = 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model[i] <= cut) continue;
    sm += sim[i] * model[i];
    mm += model[i] * model[i];
    ss += sim[i] * sim[i];
    ++f.pixels;
  }
  if (f.pixels == 0 || mm == 0 || ss == 0) return f;
  f.scale = sm / mm;
  double res = 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model[i] <= cut) continue;
    const double r = sim[i] - f.scale * model[i];
    res += r * r;
  }
  f.nrms = std::sqrt(res / ss);
  return f;
}

GaussianityReport gaussianity_report(const MomentAccumulator& acc) {
  GaussianityReport r;
  const auto& g = acc.gaussianity();
  const double k = static_cast<double>(g.size());
  if (g.size() < 2) return r;
  r.consistent = true;
  for (int d = 0; d < kProbeShifts; ++d) {
    double mean = 0, pred = 0;
    for (const auto& b : g) {
      mean += b.residual[d];
      pred += b.predicted[d];
    }
    mean /= k;
    pred /= k;
    double ss = 0;
    for (const auto& b : g) ss += (b.residual[d] - mean) * (b.residual[d] - mean);
    r.mean[d] = mean;
    r.predicted[d] = pred;
    r.error[d] = std::sqrt(ss / (k - 1) / k);
    if (std::abs(mean) > 3 * r.error[d]) r.consistent = false;
  }
  return r;
}

}  // namespace pdc
