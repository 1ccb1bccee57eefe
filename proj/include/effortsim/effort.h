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

#ifndef EFFORTSIM_EFFORT_H_
#define EFFORTSIM_EFFORT_H_

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "effortsim/dataset.h"
#include "effortsim/predictor.h"
#include "json.hpp"

namespace effortsim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// b(y, y_hat): what an individual gains from prediction y_hat.
enum class Benefit {
  kPredictedLabel,  // b = y_hat
  kShiftedGain,     // b = y_hat - y + 1
};

std::string_view benefit_name(Benefit b);
Benefit parse_benefit(std::string_view name);  // "predicted" | "shifted_gain"
double benefit_value(Benefit b, double y, double y_hat);

struct EffortParams {
  // c_s per group name; missing groups cost 0.
  std::map<std::string, double> base_costs;
  // Level-switch cost for categorical features without their own constant.
  double categorical_cost = 0.5;
  // Risk aversion; rewards compare b^alpha.
  double alpha = 1.0;

  double base_cost(const std::string& group) const;
  void validate() const;  // throws ConfigError

  static EffortParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct UtilityBreakdown {
  double reward = 0.0;
  double effort = 0.0;   // may be +inf
  double utility = 0.0;  // -inf whenever effort is +inf
};

// Fraction of group-g values of feature k that are <= x (right-continuous
// empirical CDF; 0 below the minimum, 1 at or above the maximum).
double quantile_rank(const Population& ref, std::size_t g, std::size_t k, double x);
// Same convention over group g's labels.
double label_rank(const Population& ref, std::size_t g, double y);

// epsilon_{g,k}(from, to) using ref's group-g tables.
double feature_effort(const Population& ref, const EffortParams& params, std::size_t g,
                      std::size_t k, double from, double to);

// c_g + (1/K) * sum_k c_{g,k} * epsilon_{g,k}; +inf if any term is.
double total_effort(const Population& ref, const EffortParams& params, std::size_t g,
                    std::span<const double> from, std::span<const double> to);

// b(y, y_hat)^alpha. Throws std::domain_error for a negative benefit raised
// to a non-integer power.
double risk_adjusted_benefit(Benefit b, double alpha, double y, double y_hat);

// b(h(x'), y')^alpha - b(h(x), y)^alpha.
double reward(const Predictor& h, Benefit b, double alpha, const Individual& from,
              const Individual& to);

// Reward minus effort, with effort measured in `from`'s group.
UtilityBreakdown utility(const Predictor& h, Benefit b, const EffortParams& params,
                         const Population& ref, const Individual& from,
                         const Individual& to);

}  // namespace effortsim

#endif  // EFFORTSIM_EFFORT_H_
