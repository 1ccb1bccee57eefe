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

#ifndef EFFORTSIM_SEGREGATION_H_
#define EFFORTSIM_SEGREGATION_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "effortsim/dataset.h"
#include "effortsim/dynamics.h"
#include "effortsim/effort.h"
#include "effortsim/parallel.h"
#include "effortsim/predictor.h"
#include "json.hpp"

namespace effortsim {

// Frozen metric space shared by every population measured against it.
struct MetricContext {
  std::shared_ptr<const Population> reference;
  EffortParams params;
  std::size_t minority = 0;
};

// d^s(i, j): label-rank gain plus unweighted mutable efforts, all measured
// in group s's tables. No base cost.
double directed_distance(const MetricContext& ctx, std::size_t s, const Individual& i,
                         const Individual& j);
// Max of the directed views over every group.
double distance(const MetricContext& ctx, const Individual& i, const Individual& j);
// Row-major n x n matrix of distance(pop[i], pop[j]).
Eigen::MatrixXd distance_matrix(const MetricContext& ctx, const Population& pop,
                                int threads = thread_count());

struct Unit {
  std::vector<std::size_t> members;
  std::size_t minority_count = 0;
  std::size_t total = 0;
};

struct Neighborhoods {
  enum class Construction { kFocalPoints, kPerIndividual };
  Construction construction = Construction::kFocalPoints;
  std::vector<Unit> units;
  std::vector<std::size_t> assignment;  // unit of each individual
};

// Sum of mutable efforts from x to the focal point in the individual's group.
double focal_distance(const MetricContext& ctx, const Individual& ind,
                      const FocalPoint& focal);
// Nearest focal point per individual, ties to the lowest index. Throws
// ConfigError on an empty focal list.
Neighborhoods build_focal_neighborhoods(const MetricContext& ctx,
                                        const std::vector<FocalPoint>& focal,
                                        const Population& pop);

// Absent when the overall minority share is 0 or 1, or beta is outside (0,1).
std::optional<double> atkinson(const Neighborhoods& neigh, double beta = 0.5);

// Share of minority members predicted strictly above threshold. Throws
// DataError when the minority group is empty.
double centralization(const Predictor& h, const Population& pop, std::size_t minority,
                      double threshold);

// ACI over per-individual units for a closeness matrix c and minority flags.
// Absent when the denominator is zero or a group is empty.
std::optional<double> absolute_clustering(const Eigen::MatrixXd& closeness,
                                          const std::vector<bool>& minority);
std::optional<double> absolute_clustering(const MetricContext& ctx, const Population& pop,
                                          int threads = thread_count());

struct SpectralResult {
  std::optional<double> value;
  std::vector<double> scores;  // per member, in input order
  std::size_t components = 0;
  std::string diagnostics;
};

// Within-group similarity matrix r (diagonal ignored).
SpectralResult spectral_segregation(const Eigen::MatrixXd& r, double connectivity_threshold);
SpectralResult spectral_segregation(const MetricContext& ctx, const Population& pop,
                                    std::size_t group, double connectivity_threshold = 1e-6,
                                    int threads = thread_count());

struct SegregationOptions {
  double beta = 0.5;
  std::optional<double> threshold;  // centralization; default: mean h on `before`
  double ssi_threshold = 1e-6;
};

struct SegregationReport {
  std::string population;
  std::optional<double> atkinson;
  std::optional<double> centralization;
  std::optional<double> aci;
  std::optional<double> ssi;
  std::size_t focal_points = 0;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::string> diagnostics;

  nlohmann::json to_json() const;
  // (measure, value) pairs in a fixed order; absent values are omitted.
  std::vector<std::pair<std::string, std::optional<double>>> measures() const;
};

SegregationReport segregation_report(const MetricContext& ctx, const Predictor& h,
                                     const Population& pop,
                                     const std::vector<FocalPoint>& focal,
                                     const SegregationOptions& options, double threshold,
                                     std::string label, int threads = thread_count());

// Initial and impacted reports under one frozen context.
std::pair<SegregationReport, SegregationReport> compare(
    const MetricContext& ctx, const Predictor& h, const Population& before,
    const Population& after, const std::vector<FocalPoint>& focal,
    const SegregationOptions& options = {}, int threads = thread_count());

}  // namespace effortsim

#endif  // EFFORTSIM_SEGREGATION_H_
