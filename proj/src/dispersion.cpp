#include "pdc/dispersion.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <sstream>

#include "pdc/errors.hpp"

namespace pdc {

void CrystalParams::validate() const {
  if (!(cut_angle_rad > 0 && cut_angle_rad < kPi / 2))
    throw ConfigError("crystal.cut_angle_deg", "must lie in (0, 90) degrees");
  validate_optics();
}

void CrystalParams::validate_optics() const {
  if (!(length_um > 0)) throw ConfigError("crystal.length_um", "must be positive");
  if (!(pump_wavelength_nm > 0)) throw ConfigError("crystal.pump_wavelength_nm", "must be positive");
  if (axis_orientation != 1 && axis_orientation != -1)
    throw ConfigError("crystal.axis_orientation", "must be +1 or -1");
  // Indices must be finite and > 1 over the simulated band and at the pump.
  for (double lambda_nm : {850.0, 1000.0, 1304.0, pump_wavelength_nm, signal_wavelength_nm()}) {
    const double l = lambda_nm * 1e-3;
    if (l < kMinWavelengthUm || l > kMaxWavelengthUm) continue;
    for (const Sellmeier* s : {&ordinary, &extraordinary}) {
      const double n2 = s->index_squared(l);
      if (!std::isfinite(n2) || n2 <= 1.0) {
        std::ostringstream os;
        os << "Sellmeier set gives n^2 = " << n2 << " at " << lambda_nm << " nm";
        throw ConfigError(s == &ordinary ? "crystal.sellmeier_o" : "crystal.sellmeier_e",
                          os.str());
      }
    }
  }
}

double refractive_index(const CrystalParams& crystal, double lambda_um, Polarization pol,
                        double theta_rad) {
  if (!(lambda_um >= kMinWavelengthUm && lambda_um <= kMaxWavelengthUm)) {
    std::ostringstream os;
    os << "wavelength " << lambda_um << " um outside the validated band [" << kMinWavelengthUm
       << ", " << kMaxWavelengthUm << "] um";
    throw DomainError(os.str());
  }
  const double no2 = crystal.ordinary.index_squared(lambda_um);
  if (pol == Polarization::ordinary) return std::sqrt(no2);
  const double ne2 = crystal.extraordinary.index_squared(lambda_um);
  const double c = std::cos(theta_rad);
  const double s = std::sin(theta_rad);
  return 1.0 / std::sqrt(c * c / no2 + s * s / ne2);
}

double solve_matching_angle(const CrystalParams& crystal) {
  const double ls = crystal.signal_wavelength_nm() * 1e-3;
  const double lp = crystal.pump_wavelength_nm * 1e-3;
  const double n_signal = refractive_index(crystal, ls, Polarization::ordinary);
  auto mismatch = [&](double theta) {
    return n_signal - refractive_index(crystal, lp, Polarization::extraordinary, theta);
  };
  double lo = 1e-6, hi = kPi / 2 - 1e-6;
  if (mismatch(lo) * mismatch(hi) > 0)
    throw DomainError("no collinear type-I matching angle for this crystal and pump wavelength");
  boost::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto [a, b] = boost::math::tools::toms748_solve(mismatch, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

CrystalParams bbo_515_type1() {
  CrystalParams p;
  p.name = "BBO-515-typeI";
  p.length_um = 2000.0;
  p.pump_wavelength_nm = 515.0;
  p.ordinary = {2.7359, 0.01878, 0.01822, 0.01354};
  p.extraordinary = {2.3753, 0.01224, 0.01667, 0.01516};
  p.axis_orientation = -1;
  p.cut_angle_rad = solve_matching_angle(p);
  return p;
}

CrystalParams crystal_preset(const std::string& name) {
  if (name == "BBO-515-typeI") return bbo_515_type1();
  throw ConfigError("crystal.preset", "unknown preset '" + name + "'");
}

Crystal::Crystal(CrystalParams params) : params_(std::move(params)) {
  params_.validate();
  omega_s_ = 2 * kPi * kSpeedOfLight / (params_.signal_wavelength_nm() * 1e-3);
}

double Crystal::wavelength_um(double omega_abs) const {
  return 2 * kPi * kSpeedOfLight / omega_abs;
}

double Crystal::kz(SpectralMode w, Wave wave) const {
  if (wave == Wave::signal) {
    const double omega = omega_s_ + w.omega;
    const double n = refractive_index(params_, wavelength_um(omega), Polarization::ordinary);
    const double k = n * omega / kSpeedOfLight;
    const double k2 = k * k - w.q * w.q;
    if (!(k2 > 0)) throw DomainError("evanescent signal mode");
    return std::sqrt(k2);
  }
  // Extraordinary pump: wave vector (q, k_z) on the index ellipse
  //   k_perp^2 / n_e^2 + k_par^2 / n_o^2 = (omega/c)^2,
  // with k_par the projection on the optic axis (S, C) in the (x, z) plane.
  const double omega = 2 * omega_s_ + w.omega;
  const double lambda = wavelength_um(omega);
  const double no = refractive_index(params_, lambda, Polarization::ordinary);
  const double ne = refractive_index(params_, lambda, Polarization::extraordinary, kPi / 2);
  const double k0 = omega / kSpeedOfLight;
  const double C = std::cos(params_.cut_angle_rad);
  const double S = params_.axis_orientation * std::sin(params_.cut_angle_rad);
  const double delta = 1.0 / (no * no) - 1.0 / (ne * ne);
  const double a = 1.0 / (ne * ne) + delta * C * C;
  const double b = 2.0 * delta * w.q * S * C;
  const double c = w.q * w.q * (1.0 / (ne * ne) + delta * S * S) - k0 * k0;
  const double disc = b * b - 4 * a * c;
  if (!(disc > 0)) throw DomainError("evanescent pump mode");
  const double root = (-b + std::sqrt(disc)) / (2 * a);
  if (!(root > 0)) throw DomainError("evanescent pump mode");
  return root;
}

double Crystal::k(SpectralMode w, Wave wave) const {
  const double z = kz(w, wave);
  return std::sqrt(z * z + w.q * w.q);
}

double Crystal::phase_mismatch(SpectralMode w, SpectralMode w0_minus_w) const {
  const SpectralMode w0 = w + w0_minus_w;
  return (kz(w, Wave::signal) + kz(w0_minus_w, Wave::signal) - kz(w0, Wave::pump)) *
         params_.length_um;
}

WalkoffConstants Crystal::walkoff_constants(double omega_step) const {
  const double h = omega_step;
  const double h2 = 10 * omega_step;
  const double hq = omega_step;
  auto ks = [&](double o) { return kz({0, o}, Wave::signal); };
  auto kp = [&](double o) { return kz({0, o}, Wave::pump); };
  WalkoffConstants w;
  w.k1_signal = (ks(h) - ks(-h)) / (2 * h);
  w.k1_pump = (kp(h) - kp(-h)) / (2 * h);
  w.k2_signal = (ks(h2) - 2 * ks(0) + ks(-h2)) / (h2 * h2);
  w.rho_p_rad = (kz({hq, 0}, Wave::pump) - kz({-hq, 0}, Wave::pump)) / (2 * hq);
  w.tau_gvm_fs = params_.length_um * (w.k1_signal - w.k1_pump);
  w.l_woff_um = params_.length_um * w.rho_p_rad;
  return w;
}

WalkoffConstants walkoff_constants(const CrystalParams& crystal) {
  return Crystal(crystal).walkoff_constants();
}

}  // namespace pdc
