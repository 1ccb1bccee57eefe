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

#ifndef EFFORTSIM_HARNESS_H_
#define EFFORTSIM_HARNESS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "effortsim/dataset.h"
#include "effortsim/effort.h"
#include "effortsim/predictor.h"
#include "effortsim/predictors.h"
#include "json.hpp"

namespace effortsim {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct ModelSpec {
  std::string name;
  std::string model;  // linear | ridge | tree | mlp | constrained | constant
  double lambda = 0.0;
  int max_depth = 5;
  double tau = 0.0;
  std::optional<double> value;  // constant model; default mean training label
  FeatureFilter features = FeatureFilter::kAll;
  MlpOptions mlp;

  nlohmann::json to_json() const;
};

// Experiment description. Paths are resolved against the config file's
// directory. Layout:
//   {"data": path, "schema": path | "synthetic": {...} | path,
//    "seed": n, "split": {"train_fraction": f},
//    "models": [{"name", "model", "lambda"?, "max_depth"?, "tau"?, "value"?,
//                "features"?: "all" | "mutable_plus_sensitive", "hidden"?,
//                "l2"?, "epochs"?, "learning_rate"?}],
//    "effort": {"benefit"?, "alpha"?, "base_costs"?, "categorical_cost"?},
//    "delta_points"?, "tau_grid"?, "tau_features"?, "beta"?, "minority"?,
//    "ssi_threshold"?, "centralization_threshold"?, "shift_bins"?}
struct ExperimentConfig {
  std::string sha256;  // of the config bytes, or of the canonical dump
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> schema;
  std::optional<SyntheticSpec> synthetic;
  std::optional<std::filesystem::path> synthetic_path;  // when given as a file
  std::optional<double> train_fraction;
  std::uint64_t seed = 0;
  std::vector<ModelSpec> models;
  EffortParams effort;
  Benefit benefit = Benefit::kPredictedLabel;
  std::size_t delta_points = 20;
  std::vector<double> tau_grid{0.0, 0.5, 1.0, 2.0, 5.0};
  FeatureFilter tau_features = FeatureFilter::kAll;
  double beta = 0.5;
  std::optional<std::string> minority;  // default: smallest group
  double ssi_threshold = 1e-6;
  std::optional<double> centralization_threshold;
  std::size_t shift_bins = 10;

  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir);
  // `seed` replaces the file's top-level seed before parsing.
  static ExperimentConfig load(const std::filesystem::path& path,
                               std::optional<std::uint64_t> seed = std::nullopt);
};

struct PreparedData {
  Population full;
  Population train;  // population and candidate set for every metric
  Population test;   // MAE only; equals train when no split is configured
  std::size_t minority = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // (file name, sha256)
};

PreparedData prepare_data(const ExperimentConfig& config);

struct TrainedModel {
  ModelSpec spec;
  std::shared_ptr<const Predictor> predictor;
  Population train;  // feature-restricted
  Population test;
  FitReport fit;
};

TrainedModel train_model(const ModelSpec& spec, const PreparedData& data,
                         const ExperimentConfig& config);

std::string sha256_hex(std::string_view bytes);

// Writes report files into one directory and records their hashes.
class OutputWriter {
 public:
  OutputWriter(std::filesystem::path dir, std::string command);

  void begin_stage(const std::string& name);
  void write(const std::string& name, const std::string& content);
  // Writes <command>_manifest.json (hashed outputs) and
  // <command>_timings.json (wall clock, not hashed).
  void finish(const ExperimentConfig& config, const PreparedData* data);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Stage {
    std::string name;
    std::vector<std::pair<std::string, std::string>> files;
    double seconds = 0.0;
  };
  void close_stage();

  std::filesystem::path dir_;
  std::string command_;
  std::vector<Stage> stages_;
  std::chrono::steady_clock::time_point started_;
};

void run_fairness(const ExperimentConfig& config, const std::filesystem::path& out);
void run_simulate(const ExperimentConfig& config, const std::filesystem::path& out);
void run_sweep_tau(const ExperimentConfig& config, const std::filesystem::path& out);
// Reads the report CSVs in `out` and writes SVGs next to them.
void run_figures(const ExperimentConfig& config, const std::filesystem::path& out);
// Writes the configured synthetic population and its schema.
void run_synth(const ExperimentConfig& config, const std::filesystem::path& out);
// fairness, simulate, sweep-tau and figures in sequence.
void run_all(const ExperimentConfig& config, const std::filesystem::path& out);

// Dispatches by subcommand name; throws ConfigError on an unknown name.
void run_command(std::string_view command, const ExperimentConfig& config,
                 const std::filesystem::path& out);

}  // namespace effortsim

#endif  // EFFORTSIM_HARNESS_H_
