// SPDX-License-Identifier: Apache-2.0
#include "formsum/scenario.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "formsum/report_io.hpp"

namespace formsum {
namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("formsum_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

TEST(Parse, RejectsMalformedConfigs) {
  EXPECT_THROW(parse_scenario(nlohmann::json::array()), ConfigError);
  EXPECT_THROW(parse_scenario({{"kind", "nope"}, {"grid", {{"n", 1}, {"N", 8}}}}), ConfigError);
  EXPECT_THROW(parse_scenario({{"kind", "garding"}}), ConfigError);
  EXPECT_THROW(parse_scenario({{"kind", "garding"}, {"grid", {{"n", 7}, {"N", 8}}}}), ConfigError);
}

TEST(Parse, RoundTripThroughJson) {
  for (const auto& preset : presets()) {
    const Scenario back = parse_scenario(scenario_to_json(preset));
    EXPECT_EQ(back.label, preset.label);
    EXPECT_EQ(to_string(back.kind), to_string(preset.kind));
    EXPECT_EQ(back.grid.bandlimit(), preset.grid.bandlimit());
    EXPECT_EQ(back.seed, preset.seed);
  }
}

TEST(Presets, CatalogIsStableAndComplete) {
  const std::vector<std::string> required = {
      "garding-constant", "delta-multiplier-table", "embedding-h2",
      "embedding-hp",     "interpolation-chain",    "fubini-tensor",
      "delta-well",       "nonsymmetric-drift",     "resolvent-identity"};
  EXPECT_GE(presets().size(), 9u);
  for (const auto& name : required) {
    EXPECT_TRUE(find_preset(name).has_value()) << name;
  }
  EXPECT_FALSE(find_preset("no-such-preset").has_value());
  for (const auto& p : presets()) {
    EXPECT_FALSE(p.claim_id.empty()) << p.label;
    EXPECT_FALSE(p.claim.empty()) << p.label;
  }
}

TEST(Run, GardingScenarioProducesVerdictsAndManifest) {
  const auto out = temp_dir("garding");
  const RunManifest manifest = run_scenario(*find_preset("garding-constant"), {out, 1});
  EXPECT_TRUE(manifest.all_passed());
  EXPECT_GT(manifest.verdicts_passed, 0);
  EXPECT_TRUE(std::filesystem::exists(out / "garding-constant" / "report.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "garding-constant" / "verdicts.json"));
  EXPECT_TRUE(std::filesystem::exists(out / "garding-constant" / "manifest.json"));
  const auto manifest_json =
      nlohmann::json::parse(slurp(out / "garding-constant" / "manifest.json"));
  EXPECT_EQ(manifest_json.at("verdicts_failed").get<int>(), 0);
  EXPECT_EQ(manifest_json.at("scenario_hash").get<std::string>().size(), 16u);
}

TEST(Run, HypothesisViolationSurfacesAsPrecondition) {
  Scenario bad;
  bad.kind = ScenarioKind::embedding_sweep;
  bad.label = "bad-hp";
  bad.grid = TorusGrid(1, 8);
  bad.params = {{"lemma", "Hp"}, {"k", 1.0}, {"l", 1.0}, {"gamma", 0.0}, {"p", 4.0}};
  EXPECT_THROW(run_scenario(bad, {temp_dir("badhp"), 1}), PreconditionError);
}

TEST(Run, DeterministicReruns) {
  const auto out1 = temp_dir("det1");
  const auto out2 = temp_dir("det2");
  const Scenario preset = *find_preset("embedding-h2");
  run_scenario(preset, {out1, 1});
  run_scenario(preset, {out2, 2});
  for (const char* name : {"report.csv", "verdicts.json", "samples_N16.csv", "samples_N32.csv"}) {
    EXPECT_EQ(slurp(out1 / "embedding-h2" / name), slurp(out2 / "embedding-h2" / name)) << name;
    EXPECT_FALSE(slurp(out1 / "embedding-h2" / name).empty());
  }
}

TEST(Run, FormsumBuildExportsMatrices) {
  Scenario s = *find_preset("sin-well-build");
  s.grid = TorusGrid(1, 24);  // keep the unit test light
  s.params["export_matrices"] = true;
  const auto out = temp_dir("build");
  const RunManifest manifest = run_scenario(s, {out, 1});
  EXPECT_TRUE(manifest.all_passed());
  const Matrix t = read_matrix_binary(out / "sin-well-build" / "T.bin");
  const Matrix q = read_matrix_binary(out / "sin-well-build" / "Q.bin");
  const Matrix ssum = read_matrix_binary(out / "sin-well-build" / "S.bin");
  EXPECT_EQ(t.rows(), 49);
  EXPECT_NEAR((t + q - ssum).norm(), 0.0, 1e-14);
}

TEST(ReportIo, MatrixBinaryRoundTrip) {
  Rng rng(9);
  Matrix m(5, 3);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.next_complex_normal();
  const auto path = temp_dir("mat") / "m.bin";
  write_matrix_binary(path, m);
  EXPECT_EQ((read_matrix_binary(path) - m).norm(), 0.0);
}

TEST(ReportIo, NumberFormattingIsFixedWidth) {
  EXPECT_EQ(format_number(1.0), "1.000000000000e+00");
  EXPECT_EQ(format_number(-0.5), "-5.000000000000e-01");
  EXPECT_EQ(format_number(0.0), "0.000000000000e+00");
}

}  // namespace
}  // namespace formsum
