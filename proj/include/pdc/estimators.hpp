#pragma once

// Ensemble estimators for the output signal field.
//
// Displacement-indexed arrays (corr, coh, psi, g1) use the centred layout of
// grid.hpp. Spectrum maps live on the Fourier grid and intensity maps on the
// direct grid, both in FFT order.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pdc/fft.hpp"
#include "pdc/grid.hpp"
#include "pdc/kernels.hpp"

namespace pdc {

struct EstimatorOptions {
  SpectralRegion region;
  bool correlations = true;  // C_corr / C_coh
  bool gaussianity = true;   // intensity-covariance probe
};

/// Running sums over realizations.
struct MomentSums {
  std::int64_t count = 0;
  std::vector<cplx> corr, coh;  // per realization: C(w_k) with its 1/M factor
  RealMap spectrum;             // sum |A(w)|^2
  RealMap intensity;            // sum |a(xi)|^2

  void resize(std::size_t n, bool correlations);
  void add(const MomentSums& o);
};

/// Displacements probed by the Gaussian moment identity: 0, one q pixel, one Omega pixel.
inline constexpr int kProbeShifts = 3;

/// Per-pixel sums over the region needed by the intensity-covariance probe.
struct GaussianitySums {
  std::int64_t count = 0;
  RealMap s_m, s_m2;            // sum |a|^2, sum |a|^4
  std::vector<cplx> s_y;        // sum a^2
  RealMap n_m[2], n_mm[2];      // neighbour: sum |a_n|^2, sum |a|^2 |a_n|^2
  std::vector<cplx> n_x[2];     // sum a^* a_n
  std::vector<cplx> n_y[2];     // sum a a_n
  void resize(std::size_t m);
};

/// Region-averaged residual  measured covariance - (|G1|^2 + |Psi|^2)  for one batch.
struct GaussianityBatch {
  double residual[kProbeShifts] = {0, 0, 0};
  double predicted[kProbeShifts] = {0, 0, 0};
};
GaussianityBatch gaussianity_batch(const GaussianitySums& sums);

/// Per-thread workspace turning one output field into its moment contributions.
class Correlator {
 public:
  Correlator(const SimGrid& grid, const EstimatorOptions& options);

  /// `field` is the Fourier-space signal in FFT order.
  void accumulate(const Field& field, MomentSums& sums, GaussianitySums* gauss);

  const std::vector<std::size_t>& region() const { return region_; }

 private:
  SimGrid grid_;
  EstimatorOptions options_;
  std::vector<std::size_t> region_;
  std::vector<std::size_t> neighbours_[2];
  std::unique_ptr<Fft2D> fft_, fft_pad_;
  Field direct_, pad_a_, pad_b_, pad_c_;
  std::vector<std::size_t> pad_index_;  // grid index -> padded index
};

/// FFT-based C_corr / C_coh of one field over the region (centred layout,
/// 1/M normalised). Reference: kernels::correlate_direct.
void correlate_fft(const SimGrid& grid, const Field& field, const std::vector<std::size_t>& region,
                   std::vector<cplx>& corr, std::vector<cplx>& coh);

/// Ensemble of batch sums. Batches are the unit of determinism and of the
/// jackknife error model.
class MomentAccumulator {
 public:
  MomentAccumulator(const SimGrid& grid, EstimatorOptions options);

  const SimGrid& grid() const { return grid_; }
  const EstimatorOptions& options() const { return options_; }
  std::size_t region_size() const { return region_size_; }
  std::int64_t realizations() const { return total_.count; }
  const MomentSums& total() const { return total_; }
  std::size_t batch_count() const { return batches_.size(); }
  const MomentSums& batch(std::size_t b) const { return batches_[b]; }
  const std::vector<GaussianityBatch>& gaussianity() const { return gauss_; }

  void add_batch(MomentSums batch, GaussianityBatch gauss = {});
  /// Appends the batches of `other` (same grid and region) in order.
  void merge(const MomentAccumulator& other);

 private:
  SimGrid grid_;
  EstimatorOptions options_;
  std::size_t region_size_;
  MomentSums total_;
  std::vector<MomentSums> batches_;
  std::vector<GaussianityBatch> gauss_;
};

struct FinalMoments {
  std::int64_t count = 0;
  std::vector<cplx> psi, g1;  // centred displacement layout
  RealMap spectrum;           // normal-ordered photons per Fourier pixel
  RealMap intensity;          // normal-ordered photons per direct pixel
};

/// Averages and applies the half-photon ordering correction (G1 at zero
/// displacement, spectrum, intensity). Psi needs none.
FinalMoments finalize(const MomentSums& sums, const SimGrid& grid);
FinalMoments finalize(const MomentAccumulator& acc);
/// Same, leaving batch `b` out.
FinalMoments finalize_without(const MomentAccumulator& acc, std::size_t b);

struct WidthEstimate {
  double q = 0, omega = 0;          // background-corrected stddevs
  double q_raw = 0, omega_raw = 0;  // without background subtraction
  double background = 0;            // median |peak| in the surrounding ring
  bool clipped = false;             // window hit the array edge
};

/// Second-moment widths of |peak| (centred layout) over +-4 predicted stddevs
/// around the maximum. The median magnitude in the ring out to twice that
/// window is subtracted before the moments.
WidthEstimate width_stddev(const std::vector<cplx>& peak, const SimGrid& grid, double pred_q,
                           double pred_omega);

struct ErrorBar {
  double value = 0;
  double error = 0;
};

/// Delete-one jackknife over `k` groups; `without(b)` is the estimate with group b removed.
ErrorBar jackknife(double full, std::size_t k, const std::function<double(std::size_t)>& without);

struct SpacetimeSummary {
  double centroid_x = 0, centroid_t = 0;  // um, fs
  double width_x = 0, width_t = 0;        // stddev of the distribution
  double peak_photons = 0;                // max per-pixel value
  double peak_x = 0, peak_t = 0;
};

/// Moments of an intensity map over the window +-window_x, +-window_t around its maximum.
SpacetimeSummary spacetime_summary(const RealMap& intensity, const SimGrid& grid, double window_x,
                                   double window_t);

/// Mean of the (2r+1)^2 direct pixels around the pixel nearest (x, t).
double local_mean(const RealMap& map, const SimGrid& grid, double x, double t, int r = 1);

struct ProfileFit {
  double scale = 0;
  double nrms = 0;  // sqrt(sum (sim - s model)^2 / sum sim^2)
  std::size_t pixels = 0;
};
/// Least-squares single-scale fit over pixels where model > threshold * max(model).
ProfileFit fit_profile(const RealMap& sim, const RealMap& model, double threshold);

struct GaussianityReport {
  double mean[kProbeShifts] = {0, 0, 0};
  double error[kProbeShifts] = {0, 0, 0};
  double predicted[kProbeShifts] = {0, 0, 0};
  bool consistent = false;  // every |mean| <= 3 error
};
GaussianityReport gaussianity_report(const MomentAccumulator& acc);

}  // namespace pdc
