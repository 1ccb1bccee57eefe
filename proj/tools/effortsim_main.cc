/*
 * Copyright 2026 The effortsim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line driver: effortsim <command> --config <path> --out <dir> [--seed N]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "effortsim/errors.h"
#include "effortsim/harness.h"

int main(int argc, char** argv) {
  CLI::App app{"Effort-based fairness and segregation experiments"};
  app.set_version_flag("--version", std::string(effortsim::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  const std::pair<const char*, const char*> commands[] = {
      {"fairness", "Train models and report effort-based unfairness"},
      {"simulate", "Run one imitation round and measure segregation"},
      {"sweep-tau", "Sweep the welfare-constraint strength"},
      {"figures", "Render SVG charts from report CSVs in --out"},
      {"synth", "Write the configured synthetic population"},
      {"all", "fairness, simulate, sweep-tau and figures"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Override the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto config = effortsim::ExperimentConfig::load(config_path, seed);
    effortsim::run_command(app.get_subcommands().front()->get_name(), config, out_dir);
  } catch (const effortsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const effortsim::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
