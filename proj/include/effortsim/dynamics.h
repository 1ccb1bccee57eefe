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

#ifndef EFFORTSIM_DYNAMICS_H_
#define EFFORTSIM_DYNAMICS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "effortsim/dataset.h"
#include "effortsim/effort.h"
#include "effortsim/parallel.h"
#include "effortsim/predictor.h"
#include "json.hpp"

namespace effortsim {

// Profile individual i would hold after imitating `candidate`: the
// candidate's mutable entries, sensitive entry and label, with i's other
// immutable entries kept. Imitating across groups therefore costs +inf.
Individual imitation_target(const Population& pop, std::size_t i, std::size_t candidate);

struct RoleModelChoice {
  std::size_t argmax = 0;             // best candidate, lowest index on ties
  std::optional<std::size_t> index;   // set only when best.utility > 0
  UtilityBreakdown best;
};

// Scans every member of pop (including i) as a potential social model.
RoleModelChoice select_role_model(const Predictor& h, const Population& pop,
                                  const EffortParams& params, Benefit b, std::size_t i);

struct ImitationOutcome {
  std::size_t individual_index = 0;
  std::optional<std::size_t> role_model_index;
  UtilityBreakdown exerted;  // utility of the best candidate, moved or not
  bool changed = false;
  std::vector<double> new_x;
  double new_y = 0.0;
};

// A mutable-subspace vector imitated by at least one individual.
struct FocalPoint {
  std::vector<double> values;  // aligned with schema().mutable_indices()
  std::size_t imitators = 0;
  std::size_t first_imitator = 0;
};

struct ImpactResult {
  std::vector<ImitationOutcome> outcomes;
  Population impacted;
  std::vector<FocalPoint> focal_points;  // ordered by first imitator

  nlohmann::json to_json(const Population& original) const;
};

// One simultaneous round: every individual picks a role model against the
// frozen original population and moves iff the best utility is positive.
ImpactResult simulate(const Predictor& h, const Population& pop, const EffortParams& params,
                      Benefit b, int threads = thread_count());

struct DistributionSummary {
  double mean = 0.0;
  double variance = 0.0;  // population variance
  std::vector<std::size_t> histogram;
};

struct FeatureShift {
  std::string feature;
  std::string group;
  std::vector<double> bin_edges;  // histogram.size() + 1 edges; empty for levels
  std::vector<std::string> levels;  // bin labels for levelled features
  DistributionSummary before;
  DistributionSummary after;
};

// Per feature and group, before vs after. Numeric features use `bins`
// equal-width bins over the pooled range; levelled features count levels.
std::vector<FeatureShift> feature_shift_report(const Population& original,
                                               const Population& impacted,
                                               std::size_t bins = 10);
nlohmann::json feature_shift_json(const std::vector<FeatureShift>& shifts);

}  // namespace effortsim

#endif  // EFFORTSIM_DYNAMICS_H_
