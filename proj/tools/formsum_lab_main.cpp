// SPDX-License-Identifier: Apache-2.0
//
// formsum-lab: batch scenario runner for the form-sum spectral laboratory.
//
//   formsum-lab run <config.json> [--out DIR] [--threads K]
//   formsum-lab run --preset <name> [--out DIR] [--threads K]
//   formsum-lab presets
//
// Exit codes: 0 all asserted verdicts pass, 1 verdict failure, 2 config
// error, 3 precondition rejection, 4 numeric failure. FORMSUM_LAB_SEED
// overrides the scenario seed.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "formsum/scenario.hpp"
#include "formsum/version.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& preset_name,
                const std::string& out_dir, int threads) {
  formsum::Scenario scenario{};
  if (!preset_name.empty()) {
    auto preset = formsum::find_preset(preset_name);
    if (!preset) throw formsum::ConfigError("unknown preset '" + preset_name + "'");
    scenario = *preset;
  } else if (!config_path.empty()) {
    scenario = formsum::load_scenario_file(config_path);
  } else {
    throw formsum::ConfigError("run needs a config file or --preset");
  }

  if (const char* seed_env = std::getenv("FORMSUM_LAB_SEED")) {
    try {
      scenario.seed = std::stoull(seed_env);
    } catch (const std::exception&) {
      throw formsum::ConfigError("FORMSUM_LAB_SEED is not an integer");
    }
  }

  formsum::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads;
  const formsum::RunManifest manifest = formsum::run_scenario(scenario, options);

  std::cout << scenario.label << ": " << manifest.verdicts_passed << " verdict(s) passed, "
            << manifest.verdicts_failed << " failed";
  if (!manifest.failed_verdicts.empty()) {
    std::cout << " [";
    for (std::size_t i = 0; i < manifest.failed_verdicts.size(); ++i)
      std::cout << (i ? ", " : "") << manifest.failed_verdicts[i];
    std::cout << "]";
  }
  std::cout << " (" << manifest.wall_seconds << " s)\n";
  return manifest.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"form-sum spectral laboratory"};
  app.set_version_flag("--version", formsum::kVersion);
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir = "out";
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "execute one scenario");
  run->add_option("config", config_path, "scenario JSON file");
  run->add_option("--preset", preset_name, "built-in preset name");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "scenario-internal worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& s : formsum::presets())
        std::cout << s.label << "  [" << formsum::to_string(s.kind) << ", n=" << s.grid.dim()
                  << ", N=" << s.grid.bandlimit() << "]  " << s.claim << "\n";
      return 0;
    }
    return run_command(config_path, preset_name, out_dir, threads);
  } catch (const formsum::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const formsum::PreconditionError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return 3;
  } catch (const formsum::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
