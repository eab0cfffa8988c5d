#include <doctest.h>

#include <cmath>

#include "pdc/dispersion.hpp"
#include "pdc/errors.hpp"

using namespace pdc;

// Frozen values from tests/oracles/dispersion_oracle.py (50-digit mpmath,
// analytic derivatives and closed-form Poynting angle).
namespace oracle {
constexpr double n_o_1030 = 1.655157603561712;
constexpr double n_e_515 = 1.555803272584432;
constexpr double theta_c_deg = 23.3215016751;
constexpr double k1_signal = 5.586892881443;
constexpr double k1_pump = 5.681734016235;
constexpr double k2_signal = 4.573719649331e-02;
constexpr double tau_gvm = -189.68226959;
constexpr double l_woff = -113.64061129;
constexpr double rho_p_deg = -3.2520668950;  // atan of dk_pz/dq_x
}  // namespace oracle

TEST_CASE("Sellmeier indices match the oracle") {
  const CrystalParams p = bbo_515_type1();
  CHECK(refractive_index(p, 1.030, Polarization::ordinary) ==
        doctest::Approx(oracle::n_o_1030).epsilon(1e-14));
  CHECK(refractive_index(p, 0.515, Polarization::extraordinary, kPi / 2) ==
        doctest::Approx(oracle::n_e_515).epsilon(1e-14));
  // theta = 0 reduces the extraordinary index to n_o.
  CHECK(refractive_index(p, 0.515, Polarization::extraordinary, 0.0) ==
        doctest::Approx(refractive_index(p, 0.515, Polarization::ordinary)).epsilon(1e-15));
}

TEST_CASE("matching angle solves collinear degenerate matching") {
  const CrystalParams p = bbo_515_type1();
  CHECK(p.cut_angle_rad * 180 / kPi == doctest::Approx(oracle::theta_c_deg).epsilon(1e-9));
  const Crystal c(p);
  CHECK(std::abs(c.phase_mismatch_pwp({0, 0})) < 1e-9);
}

TEST_CASE("walk-off constants match the oracle") {
  const WalkoffConstants w = walkoff_constants(bbo_515_type1());
  CHECK(w.k1_signal == doctest::Approx(oracle::k1_signal).epsilon(1e-8));
  CHECK(w.k1_pump == doctest::Approx(oracle::k1_pump).epsilon(1e-8));
  CHECK(w.k2_signal == doctest::Approx(oracle::k2_signal).epsilon(1e-4));
  CHECK(w.tau_gvm_fs == doctest::Approx(oracle::tau_gvm).epsilon(1e-6));
  CHECK(w.l_woff_um == doctest::Approx(oracle::l_woff).epsilon(1e-6));
  CHECK(std::atan(w.rho_p_rad) * 180 / kPi == doctest::Approx(oracle::rho_p_deg).epsilon(1e-6));
  // Sign conventions: the signal lags the pump, and the pump walks toward -x.
  CHECK(w.tau_gvm_fs < 0);
  CHECK(w.rho_p_rad < 0);
}

TEST_CASE("mismatch symmetry and the pump tilt") {
  const Crystal c(bbo_515_type1());
  for (double q : {0.01, 0.05, 0.1})
    for (double o : {-0.1, 0.03, 0.15}) {
      CHECK(c.phase_mismatch_pwp({q, o}) == doctest::Approx(c.phase_mismatch_pwp({-q, -o})).epsilon(1e-12));
      CHECK(c.phase_mismatch({q, o}, {0.02 - q, -o}) ==
            doctest::Approx(c.phase_mismatch({0.02 - q, -o}, {q, o})).epsilon(1e-12));
    }
  // The pump is not mirror symmetric in q; the signal is.
  CHECK(c.kz({0.05, 0}, Wave::signal) == doctest::Approx(c.kz({-0.05, 0}, Wave::signal)));
  CHECK(c.kz({0.05, 0}, Wave::pump) < c.kz({-0.05, 0}, Wave::pump));
  // |k_p| on the index ellipse matches n_e(theta) at the tilted direction.
  const double q = 0.05;
  const double kz = c.kz({q, 0}, Wave::pump);
  const double theta = c.params().cut_angle_rad - c.params().axis_orientation * std::atan2(q, kz);
  const double n = refractive_index(c.params(), 0.515, Polarization::extraordinary, theta);
  CHECK(c.k({q, 0}, Wave::pump) == doctest::Approx(n * 2 * c.signal_carrier() / kSpeedOfLight).epsilon(1e-12));
}

TEST_CASE("domain errors") {
  const CrystalParams p = bbo_515_type1();
  CHECK_THROWS_AS(refractive_index(p, 2.0, Polarization::ordinary), DomainError);
  const Crystal c(p);
  CHECK_THROWS_AS(c.kz({20.0, 0}, Wave::signal), DomainError);
  CHECK_THROWS_AS(c.kz({0, -1.5}, Wave::signal), DomainError);
  CrystalParams bad = p;
  bad.length_um = -1;
  CHECK_THROWS_AS(Crystal{bad}, ConfigError);
  CHECK_THROWS_AS(crystal_preset("quartz"), ConfigError);
}
