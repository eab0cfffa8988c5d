#pragma once

// Uniaxial chi(2) crystal dispersion: Sellmeier indices, longitudinal wave
// numbers, phase mismatch and the walk-off constants derived from them.
//
// Units throughout: lengths in um, times in fs, angular frequencies in rad/fs,
// transverse wave vectors in 1/um.

#include <string>

namespace pdc {

inline constexpr double kSpeedOfLight = 0.299792458;  // um/fs
inline constexpr double kPi = 3.14159265358979323846;

enum class Polarization { ordinary, extraordinary };
enum class Wave { signal, pump };

/// n^2 = a + b / (lambda^2 - c) - d lambda^2, lambda in um.
struct Sellmeier {
  double a = 0, b = 0, c = 0, d = 0;
  double index_squared(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    return a + b / (l2 - c) - d * l2;
  }
};

/// A Fourier mode w = (q_x, Omega) relative to the carrier.
struct SpectralMode {
  double q = 0;      // 1/um
  double omega = 0;  // rad/fs
  SpectralMode operator-() const { return {-q, -omega}; }
  SpectralMode operator+(SpectralMode o) const { return {q + o.q, omega + o.omega}; }
  SpectralMode operator-(SpectralMode o) const { return {q - o.q, omega - o.omega}; }
};

struct CrystalParams {
  std::string name = "custom";
  double length_um = 0;
  double cut_angle_rad = 0;  // angle between propagation axis and optic axis
  Sellmeier ordinary;
  Sellmeier extraordinary;
  double pump_wavelength_nm = 0;  // signal is degenerate at twice this
  // Sign of the optic-axis tilt toward +x; -1 makes dk_pz/dq_x negative.
  int axis_orientation = -1;

  double signal_wavelength_nm() const { return 2 * pump_wavelength_nm; }
  /// Throws ConfigError on the first violated invariant.
  void validate() const;
  /// The checks of `validate` that do not involve the cut angle.
  void validate_optics() const;
};

struct WalkoffConstants {
  double tau_gvm_fs = 0;   // l_c (k'_s - k'_p): signal delay relative to the pump
  double l_woff_um = 0;    // l_c rho_p: signal lateral offset relative to the pump
  double rho_p_rad = 0;    // dk_pz/dq_x at the carrier
  double k1_signal = 0;    // fs/um
  double k1_pump = 0;      // fs/um
  double k2_signal = 0;    // fs^2/um
};

inline constexpr double kMinWavelengthUm = 0.4;
inline constexpr double kMaxWavelengthUm = 1.5;

/// Refractive index. For extraordinary polarization `theta_rad` is the angle
/// between wave vector and optic axis; it is ignored for ordinary light.
double refractive_index(const CrystalParams& crystal, double lambda_um, Polarization pol,
                        double theta_rad = 0);

/// Solves D(0) l_c = 0 (collinear degenerate matching) for the cut angle.
double solve_matching_angle(const CrystalParams& crystal);

/// 2 mm BBO, type I e-oo, 515 nm pump, cut angle solved for collinear matching.
CrystalParams bbo_515_type1();

/// Named presets understood by the config loader.
CrystalParams crystal_preset(const std::string& name);

class Crystal {
 public:
  explicit Crystal(CrystalParams params);

  const CrystalParams& params() const { return params_; }
  double length_um() const { return params_.length_um; }
  double signal_carrier() const { return omega_s_; }  // rad/fs
  double pump_carrier() const { return 2 * omega_s_; }

  /// Wave-number magnitude k_j(q, Omega); direction dependent for the pump.
  double k(SpectralMode w, Wave wave) const;
  /// Longitudinal projection k_jz = sqrt(k_j^2 - q^2). Throws DomainError for
  /// evanescent modes or wavelengths outside the validated band.
  double kz(SpectralMode w, Wave wave) const;

  /// D(w; w0 - w) l_c = [k_sz(w) + k_sz(w0 - w) - k_pz(w0)] l_c.
  double phase_mismatch(SpectralMode w, SpectralMode w0_minus_w) const;
  /// Plane-wave-pump mismatch D(w) l_c = D(w; -w) l_c.
  double phase_mismatch_pwp(SpectralMode w) const {
    return phase_mismatch(w, -w);
  }

  /// Group constants by centred finite differences with step `omega_step`
  /// (rad/fs); the transverse step uses the same number in 1/um.
  WalkoffConstants walkoff_constants(double omega_step = 1e-3) const;

 private:
  double wavelength_um(double omega_abs) const;
  CrystalParams params_;
  double omega_s_;
};

/// Convenience wrapper over Crystal::walkoff_constants.
WalkoffConstants walkoff_constants(const CrystalParams& crystal);

}  // namespace pdc
