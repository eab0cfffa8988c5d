#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pdc/commands.hpp"
#include "pdc/errors.hpp"
#include "pdc/wigner_sim.hpp"

using namespace pdc;

namespace {
fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pdc_cmd_" + name);
  fs::remove_all(d);
  return d;
}
ExperimentConfig tiny(const fs::path& out) {
  json doc = {{"preset", "thin-crystal"},
              {"gains", {1.0}},
              {"analysis", {{"correlations", true}, {"gaussianity", true}}},
              {"simulation", {{"realizations", 6}, {"n_steps", 10}, {"workers", 1}}},
              {"output_dir", out.string()}};
  return config_from_json(doc);
}
}  // namespace

TEST_CASE("gain labels") {
  CHECK(gain_label(0.5) == "g_0.5");
  CHECK(gain_label(7) == "g_7");
  CHECK(gain_label(3.25) == "g_3.25");
}

TEST_CASE("1/e half-width of a Gaussian map") {
  const SimGrid g(GridSpec{256, 256, 0.15, 0.192});
  RealMap map(g.size());
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int it = 0; it < g.nt(); ++it) {
      const double u = (g.x(ix) + 50) / 300, v = (g.t(it) + 90) / 160;
      map[g.index(ix, it)] = 10 * std::exp(-u * u - v * v);
    }
  // Intensity 1/e half-width of exp(-u^2) is the envelope width itself.
  CHECK(halfwidth_1e(map, g, 1, -50, -90) == doctest::Approx(160).epsilon(0.02));
  CHECK(halfwidth_1e(map, g, 0, -50, -90) == doctest::Approx(300).epsilon(0.02));
}

TEST_CASE("predict, simulate, analyze and compare on a tiny run") {
  const fs::path root = temp_dir("pipeline");
  std::ostringstream log;
  ExperimentConfig pc = tiny(root / "pred");
  REQUIRE(cmd_predict(pc, log) == kExitOk);
  CHECK(fs::exists(root / "pred" / "g_1" / "summary.json"));
  CHECK(fs::exists(root / "pred" / "manifest.json"));

  ExperimentConfig sc = tiny(root / "sim");
  REQUIRE(cmd_simulate(sc, log) == kExitOk);
  const json s1 = read_json(root / "sim" / "g_1" / "summary.json");
  CHECK(s1["realizations"] == 6);
  CHECK(s1["batches"] == 3);
  const auto digest = sha256_file(root / "sim" / "g_1" / "intensity.bin");

  // Re-analysis from the stored batches reproduces the arrays bitwise.
  REQUIRE(cmd_analyze(root / "sim", log) == kExitOk);
  CHECK(sha256_file(root / "sim" / "g_1" / "intensity.bin") == digest);
  CHECK(read_json(root / "sim" / "g_1" / "summary.json") == s1);

  const MomentAccumulator acc = load_accumulator(root / "sim" / "g_1" / "accumulator");
  CHECK(acc.batch_count() == 3);
  CHECK(acc.realizations() == 6);

  const int rc = cmd_compare(root / "pred", root / "sim", root / "cmp", log);
  CHECK((rc == kExitOk || rc == kExitComparisonFailed));
  CHECK(fs::exists(root / "cmp" / "report.tsv"));
  CHECK(read_json(root / "cmp" / "report.json")["rows"].size() > 0);

  // Incommensurate runs are refused.
  ExperimentConfig other = tiny(root / "pred2");
  other.pump.waist_um = 250;
  REQUIRE(cmd_predict(other, log) == kExitOk);
  CHECK_THROWS_AS(compare_runs(root / "pred2", root / "sim"), ComparisonError);
}
