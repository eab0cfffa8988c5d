#include <doctest.h>

#include <fstream>

#include "pdc/array_io.hpp"
#include "pdc/config.hpp"
#include "pdc/errors.hpp"

using namespace pdc;

namespace {
fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pdc_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}
std::string key_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}
}  // namespace

TEST_CASE("presets load and round-trip") {
  for (const auto& name : experiment_presets()) {
    const ExperimentConfig c = config_from_json({{"preset", name}});
    const ExperimentConfig again = config_from_json(c.to_json());
    CHECK(again.to_json() == c.to_json());
  }
  const ExperimentConfig s = config_from_json({{"preset", "short-pump"}});
  CHECK(s.pump.duration_fs == 160);
  const ExperimentConfig l = config_from_json(json::object());
  CHECK(l.preset == "long-pump");
  CHECK(l.crystal.cut_angle_rad * 180 / kPi == doctest::Approx(23.3215).epsilon(1e-5));
}

TEST_CASE("configuration errors carry the key path") {
  CHECK(key_of({{"pump", {{"waist_um", -1.0}}}}) == "pump.waist_um");
  CHECK(key_of({{"pump", {{"wasit_um", 100.0}}}}) == "pump.wasit_um");
  CHECK(key_of({{"grid", {{"n_x", 255}}}}) == "grid.n_x");
  CHECK(key_of({{"simulation", {{"scheme", "rk4"}}}}) == "simulation.scheme");
  CHECK(key_of({{"simulation", {{"realizations", "many"}}}}) == "simulation.realizations");
  CHECK(key_of({{"analysis", {{"region", {{"q_hi_inv_um", 0.5}}}}}}) == "analysis.region");
  CHECK(key_of({{"crystal", {{"sellmeier_o", {1.0, 0.0}}}}}) == "crystal.sellmeier_o");
  CHECK(key_of({{"crystal", {{"sellmeier_o", {0.5, 0.0, 0.0, 0.0}}}}}) == "crystal.sellmeier_o");
  CHECK(key_of({{"preset", "nonsense"}}) == "preset");
  CHECK(key_of({{"gains", json::array()}}) == "gains");
  CHECK(key_of({{"colour", 1}}) == "colour");
}

TEST_CASE("overrides and crystal handling") {
  json doc = json::object();
  apply_override(doc, "simulation.realizations=42");
  apply_override(doc, "pump.duration_fs=300");
  apply_override(doc, "output_dir=somewhere");
  apply_override(doc, "gains=[0.5, 7]");
  const ExperimentConfig c = config_from_json(doc);
  CHECK(c.realizations == 42);
  CHECK(c.pump.duration_fs == 300);
  CHECK(c.output_dir == "somewhere");
  CHECK(c.gains == std::vector<double>{0.5, 7.0});
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);

  // Changing the pump wavelength re-solves the matching angle unless one is given.
  const ExperimentConfig shifted = config_from_json({{"crystal", {{"pump_wavelength_nm", 532.0}}}});
  CHECK(shifted.crystal.cut_angle_rad != c.crystal.cut_angle_rad);
  const ExperimentConfig fixed = config_from_json({{"crystal", {{"cut_angle_deg", 29.0}}}});
  CHECK(fixed.crystal.cut_angle_rad == doctest::Approx(29.0 * kPi / 180));
  const ExperimentConfig named = config_from_json({{"crystal", {{"preset", "BBO-515-typeI"}, {"length_um", 1000.0}}}});
  CHECK(named.crystal.length_um == 1000.0);
}

TEST_CASE("array files round-trip with metadata") {
  const fs::path d = temp_dir("arrays");
  const std::vector<double> r{1.5, -2.0, 3.25, 0.0, 1e-300, 7.0};
  write_array(d / "real", r, {2, 3}, {{"units", "photons"}});
  ArrayInfo info;
  CHECK(read_real_array(d / "real", &info) == r);
  CHECK(info.dtype == "f64");
  CHECK(info.shape == std::vector<std::size_t>{2, 3});
  CHECK(info.meta["units"] == "photons");
  const std::vector<cplx> c{{1, 2}, {-3, 0.5}};
  write_array(d / "cplx", c.data(), c.size(), {2});
  CHECK(read_complex_array(d / "cplx") == c);
  CHECK_THROWS(read_complex_array(d / "real"));
  CHECK_THROWS(write_array(d / "bad", r, {4, 4}));
}

TEST_CASE("SHA-256 digests and manifests") {
  const fs::path d = temp_dir("digest");
  write_text(d / "abc.txt", "abc");
  CHECK(sha256_file(d / "abc.txt") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::create_directories(d / "sub");
  write_text(d / "sub" / "x.txt", "");
  write_manifest(d, {{"command", "test"}});
  const json m = read_json(d / "manifest.json");
  CHECK(m["command"] == "test");
  CHECK(m["version"] == version_string());
  CHECK(m["files"].size() == 2);
  CHECK(m["files"]["sub/x.txt"] == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
