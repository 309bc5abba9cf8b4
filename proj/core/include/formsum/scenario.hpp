// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "formsum/spectra.hpp"

#include <nlohmann/json.hpp>

namespace formsum {

enum class ScenarioKind {
  garding,
  multiplier_table,
  embedding_sweep,
  relative_bound,
  formsum_build,
  convergence_study,
  symmetric_compact,
  resolvent_identity,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct Scenario {
  ScenarioKind kind = ScenarioKind::garding;
  std::string label = "scenario";
  TorusGrid grid{1, 128};
  std::uint64_t seed = 0;
  nlohmann::json params;  // kind-specific block
  // stable claim the scenario exercises, recorded in the verdict block
  std::string claim_id;
  std::string claim;
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  int threads = 1;
};

struct RunManifest {
  std::string scenario_hash;
  std::string version;
  double wall_seconds = 0.0;
  int verdicts_passed = 0;
  int verdicts_failed = 0;
  std::vector<std::string> failed_verdicts;
  std::vector<std::string> files;

  bool all_passed() const { return verdicts_failed == 0; }
};

// Parses a scenario config; throws ConfigError on malformed input and lets
// module PreconditionError/NumericError pass through.
Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario_file(const std::filesystem::path& path);

nlohmann::ordered_json scenario_to_json(const Scenario& s);

// Executes the scenario, writes report.csv / verdicts.json (+ kind-specific
// files) and manifest.json under out_dir/<label>/, and returns the manifest.
RunManifest run_scenario(const Scenario& scenario, const RunOptions& options);

// Built-in presets, in stable order.
const std::vector<Scenario>& presets();
std::optional<Scenario> find_preset(const std::string& name);

}  // namespace formsum
