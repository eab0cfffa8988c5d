#pragma once

// Closed-form results of the plane-wave-pump (PWP) and quasi-stationary (QS)
// models on a SimGrid.
//
// Discrete conventions: Fourier moments refer to unitary-DFT mode amplitudes
// (photons per mode), so the discrete peak functions are
//   mu_disc(w) = mu(w) dq dOmega = N^{-1} sum_xi exp(-i w.xi) F(xi - xi_M),
// and the QS moments read
//   Psi(w1, w2) = mu_corr_disc(w1 + w2) U(w1) V(w1),
//   G1(w1, w2)  = mu_coh_disc(w2 - w1) |V(w1)|^2.

#include <string>
#include <vector>

#include "pdc/dispersion.hpp"
#include "pdc/grid.hpp"
#include "pdc/pump.hpp"

namespace pdc {

/// U, V and Gamma^2 for one mode with mismatch D l_c.
struct PwpGain {
  cplx u;
  cplx v;
  double gamma_sq;  // g^2 - (D l_c)^2 / 4; negative on the oscillatory branch
};
PwpGain pwp_gain(double g, double mismatch);

/// PWP gain functions sampled on the Fourier grid.
class GainFunctions {
 public:
  /// `zero_mismatch` forces D l_c = 0 everywhere (thin-crystal limit).
  GainFunctions(const SimGrid& grid, const Crystal& crystal, double g, bool zero_mismatch = false);

  double gain() const { return g_; }
  const std::vector<cplx>& u() const { return u_; }
  const std::vector<cplx>& v() const { return v_; }
  const RealMap& gamma_sq() const { return gamma_sq_; }
  const RealMap& mismatch() const { return mismatch_; }  // D(w) l_c
  /// sum_w |V(w)|^2
  double total_v2() const;

 private:
  double g_;
  std::vector<cplx> u_, v_;
  RealMap gamma_sq_, mismatch_;
};

enum class Envelope { corr, coh };

/// F_corr = sinh(2g|a|)/sinh(2g), F_coh = sinh^2(g|a|)/sinh^2(g); g -> 0 limits |a|, |a|^2.
double envelope_value(Envelope kind, double g, double pump_magnitude);

struct PeakWidths {
  double corr_q = 0, corr_omega = 0;  // stddev of |mu_corr| along q (1/um) and Omega (rad/fs)
  double coh_q = 0, coh_omega = 0;
};

/// sqrt(4g / tanh 2g)/Delta_p and sqrt(4g / tanh g)/Delta_p per axis. Requires a
/// real symmetric (unchirped, finite) pump.
PeakWidths peak_widths(double g, const PumpProfile& pump);

/// 1/e half-width of sinh^2(g alpha(t)) for a Gaussian alpha of 1/e half-width tau_p.
double narrowed_width(double g, double tau_p);

struct QsOptions {
  bool zero_mismatch = false;  // U -> cosh g, V -> sinh g
  bool zero_offset = false;    // xi_M -> 0
};

class QsModel {
 public:
  QsModel(const SimGrid& grid, const Crystal& crystal, const PumpProfile& pump, double g,
          QsOptions options = {});

  const SimGrid& grid() const { return grid_; }
  double gain() const { return gains_.gain(); }
  const GainFunctions& gains() const { return gains_; }
  const WalkoffConstants& walkoff() const { return walkoff_; }
  double offset_x() const { return xm_; }  // um
  double offset_t() const { return tm_; }  // fs
  /// Overall phase k_p l_c of Psi; kept as metadata, not applied.
  double carrier_phase() const { return carrier_phase_; }
  /// Resolution problems found when sampling the envelopes (empty if none).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// F_beta(x - x_M, t - t_M), direct grid, FFT order.
  RealMap envelope(Envelope kind) const;
  /// Discrete peaks mu_disc, Fourier grid, FFT order (see header comment).
  const Field& mu_disc(Envelope kind) const { return kind == Envelope::corr ? mu_corr_ : mu_coh_; }
  /// Continuous-normalized peak mu = mu_disc / (dq dOmega).
  Field mu(Envelope kind) const;

  cplx psi(std::size_t w1, std::size_t w2) const;
  cplx g1(std::size_t w1, std::size_t w2) const;
  /// |G1|^2 + |Psi|^2: normal-ordered intensity covariance of a Gaussian state.
  double intensity_covariance(std::size_t w1, std::size_t w2) const;

  /// Mean photons per direct pixel at (x, t): F_coh(xi - xi_M) N^{-1} sum_w |V|^2.
  double mean_photons(double x, double t) const;
  RealMap mean_photon_distribution() const;

 private:
  std::size_t add(std::size_t a, std::size_t b, int sign) const;
  SimGrid grid_;
  PumpProfile pump_;
  GainFunctions gains_;
  WalkoffConstants walkoff_;
  double xm_ = 0, tm_ = 0;
  double carrier_phase_ = 0;
  double v2_per_pixel_ = 0;
  Field mu_corr_, mu_coh_;
  std::vector<std::string> warnings_;
};

/// Stddevs of the sampled |mu_corr| and |mu_coh| (second moments over the whole grid).
PeakWidths sampled_peak_widths(const QsModel& model);

/// Direct-space thin-crystal moments <a(xi) a(xi')> and <a^+(xi) a(xi')>.
struct ThinCrystalMoments {
  cplx psi;
  double g1 = 0;
};
ThinCrystalMoments thin_crystal_moments(const PumpProfile& pump, double g, double x1, double t1,
                                        double x2, double t2);

}  // namespace pdc
