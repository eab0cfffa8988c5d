#pragma once

#include <complex>

namespace pdc {

/// Classical Gaussian pump envelope alpha_p(x, t), normalized so alpha_p(0) = 1.
///
/// Widths are 1/e amplitude half-widths. The optional chirp is a quadratic
/// phase chirp_x x^2 + chirp_t t^2. A plane-wave pump has alpha_p == 1 on the
/// whole grid (used for the PWP-limit checks).
struct PumpProfile {
  double waist_um = 600.0;
  double duration_fs = 600.0;
  double chirp_x = 0.0;    // rad/um^2
  double chirp_t = 0.0;    // rad/fs^2
  double peak_flux = 0.0;  // photons/(um fs); 0 selects kDefaultPeakPixelPhotons on the peak pixel
  bool plane_wave = false;

  bool chirped() const { return chirp_x != 0.0 || chirp_t != 0.0; }

  std::complex<double> amplitude(double x_um, double t_fs) const;
  double magnitude(double x_um, double t_fs) const { return std::abs(amplitude(x_um, t_fs)); }

  /// Analytic transform  int d^2xi/(2 pi) exp(-i w.xi) alpha_p(xi),  w.xi = q x - Omega t.
  /// Only defined for finite (non plane-wave) pumps.
  std::complex<double> fourier_profile(double q, double omega) const;

  /// Throws ConfigError on non-positive widths.
  void validate() const;
};

inline constexpr double kDefaultPeakPixelPhotons = 1e8;

}  // namespace pdc
