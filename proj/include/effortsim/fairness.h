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

#ifndef EFFORTSIM_FAIRNESS_H_
#define EFFORTSIM_FAIRNESS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "effortsim/dataset.h"
#include "effortsim/effort.h"
#include "effortsim/parallel.h"
#include "effortsim/predictor.h"
#include "json.hpp"

namespace effortsim {

enum class Measure {
  kBoundedEffort,
  kThresholdReward,
  kEffortReward,
  kPositiveResidualDiff,
  kNegativeResidualDiff,
};

std::string_view measure_name(Measure m);

// Spread of per-group values: |a - b| for two groups, max - min for more,
// exactly 0 for a single group. Absent when any group value is absent.
std::optional<double> disparity(const std::vector<std::optional<double>>& values);

struct UnfairnessReport {
  Measure measure = Measure::kEffortReward;
  std::optional<double> delta;
  std::vector<std::string> group_names;
  std::vector<std::optional<double>> per_group;
  std::optional<double> disparity;
  // Threshold-reward only: fraction of each group with a feasible candidate.
  std::vector<double> feasibility;

  nlohmann::json to_json() const;
};

// Effort and reward between every (individual, candidate) pair of a
// population that serves as its own candidate set and quantile reference.
// Reward(i, j) = B_j - B_i with B = b(y, h(x))^alpha, identical to reward().
class PairwiseTables {
 public:
  PairwiseTables(const Predictor& h, const Population& pop, const EffortParams& params,
                 Benefit b, int threads = thread_count());

  std::size_t size() const { return n_; }
  double effort(std::size_t i, std::size_t j) const { return effort_[i * n_ + j]; }
  double reward(std::size_t i, std::size_t j) const { return adjusted_[j] - adjusted_[i]; }
  std::size_t group(std::size_t i) const { return groups_[i]; }
  std::size_t group_count() const { return group_names_.size(); }
  const std::vector<std::string>& group_names() const { return group_names_; }

  // Largest finite pairwise effort / largest pairwise reward; default
  // delta-grid spans.
  double max_finite_effort() const;
  double max_reward() const;

 private:
  std::size_t n_;
  std::vector<double> effort_;
  std::vector<double> adjusted_;
  std::vector<std::size_t> groups_;
  std::vector<std::string> group_names_;
};

// Per individual: best reward among candidates with effort <= delta, or 0
// when no candidate is within budget.
std::vector<double> bounded_effort_values(const PairwiseTables& t, double delta);
// Per individual: least effort among candidates with reward >= delta; empty
// when no candidate qualifies.
std::vector<std::optional<double>> threshold_reward_values(const PairwiseTables& t,
                                                           double delta);
// Per individual: max(0, best utility over candidates).
std::vector<double> effort_reward_values(const PairwiseTables& t);

UnfairnessReport bounded_effort(const PairwiseTables& t, double delta);
UnfairnessReport threshold_reward(const PairwiseTables& t, double delta);
UnfairnessReport effort_reward(const PairwiseTables& t);

UnfairnessReport bounded_effort(const Predictor& h, const Population& pop,
                                const EffortParams& params, Benefit b, double delta);
UnfairnessReport threshold_reward(const Predictor& h, const Population& pop,
                                  const EffortParams& params, Benefit b, double delta);
UnfairnessReport effort_reward(const Predictor& h, const Population& pop,
                               const EffortParams& params, Benefit b);

// (positive residual difference, negative residual difference).
std::pair<UnfairnessReport, UnfairnessReport> residual_differences(const Predictor& h,
                                                                   const Population& pop);

struct DeltaCurve {
  Measure measure = Measure::kBoundedEffort;
  std::vector<double> deltas;
  std::vector<std::string> group_names;
  // values[g][t] aligned with deltas; absent where no group member is
  // feasible (threshold-reward only).
  std::vector<std::vector<std::optional<double>>> values;
  std::vector<std::vector<double>> feasibility;  // threshold-reward only

  // Rows of (delta, group, value[, feasibility]) with the given model label.
  void write_csv_rows(std::ostream& out, std::string_view model) const;
};

// Only kBoundedEffort and kThresholdReward are sweepable. `grid` must be
// sorted ascending.
DeltaCurve sweep_delta(Measure measure, const PairwiseTables& t,
                       const std::vector<double>& grid);
DeltaCurve sweep_delta(Measure measure, const Predictor& h, const Population& pop,
                       const EffortParams& params, Benefit b,
                       const std::vector<double>& grid);

// `points` evenly spaced values from 0 to `hi` inclusive.
std::vector<double> linear_grid(double hi, std::size_t points);

}  // namespace effortsim

#endif  // EFFORTSIM_FAIRNESS_H_
