#include "pdc/pump.hpp"

#include <cmath>

#include "pdc/dispersion.hpp"
#include "pdc/errors.hpp"

namespace pdc {

using namespace std::complex_literals;

std::complex<double> PumpProfile::amplitude(double x_um, double t_fs) const {
  if (plane_wave) return 1.0;
  const double u = x_um / waist_um;
  const double v = t_fs / duration_fs;
  const double phase = chirp_x * x_um * x_um + chirp_t * t_fs * t_fs;
  return std::exp(-u * u - v * v) * std::exp(1i * phase);
}

std::complex<double> PumpProfile::fourier_profile(double q, double omega) const {
  if (plane_wave) throw UnsupportedPremise("plane-wave pump has no finite Fourier profile");
  // exp(-p s^2) -> sqrt(pi/p) exp(-k^2/(4p)) per axis, with complex p for chirp.
  const std::complex<double> px = 1.0 / (waist_um * waist_um) - 1i * chirp_x;
  const std::complex<double> pt = 1.0 / (duration_fs * duration_fs) - 1i * chirp_t;
  const std::complex<double> fx = std::sqrt(kPi / px) * std::exp(-q * q / (4.0 * px));
  const std::complex<double> ft = std::sqrt(kPi / pt) * std::exp(-omega * omega / (4.0 * pt));
  return fx * ft / (2 * kPi);
}

void PumpProfile::validate() const {
  if (plane_wave) return;
  if (!(waist_um > 0)) throw ConfigError("pump.waist_um", "must be positive");
  if (!(duration_fs > 0)) throw ConfigError("pump.duration_fs", "must be positive");
  if (peak_flux < 0) throw ConfigError("pump.peak_flux", "must be non-negative");
}

}  // namespace pdc
