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

#include "effortsim/effort.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "effortsim/errors.h"

namespace effortsim {

std::string_view benefit_name(Benefit b) {
  return b == Benefit::kPredictedLabel ? "predicted" : "shifted_gain";
}

Benefit parse_benefit(std::string_view name) {
  if (name == "predicted") return Benefit::kPredictedLabel;
  if (name == "shifted_gain") return Benefit::kShiftedGain;
  throw ConfigError("unknown benefit '" + std::string(name) + "'");
}

double benefit_value(Benefit b, double y, double y_hat) {
  return b == Benefit::kPredictedLabel ? y_hat : y_hat - y + 1.0;
}

double EffortParams::base_cost(const std::string& group) const {
  auto it = base_costs.find(group);
  return it == base_costs.end() ? 0.0 : it->second;
}

void EffortParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be a positive finite number");
  }
  if (!(categorical_cost >= 0.0) || !std::isfinite(categorical_cost)) {
    throw ConfigError("categorical_cost must be finite and >= 0");
  }
  for (const auto& [g, c] : base_costs) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw ConfigError("base cost for group '" + g + "' must be finite and >= 0");
    }
  }
}

EffortParams EffortParams::from_json(const nlohmann::json& j) {
  EffortParams p;
  try {
    if (j.contains("base_costs")) {
      p.base_costs = j.at("base_costs").get<std::map<std::string, double>>();
    }
    p.categorical_cost = j.value("categorical_cost", p.categorical_cost);
    p.alpha = j.value("alpha", p.alpha);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("effort params: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json EffortParams::to_json() const {
  return {{"base_costs", base_costs},
          {"categorical_cost", categorical_cost},
          {"alpha", alpha}};
}

namespace {

double fraction_at_most(std::span<const double> sorted, double x) {
  const auto n = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
  return static_cast<double>(n) / static_cast<double>(sorted.size());
}

double fraction_at_least(std::span<const double> sorted, double x) {
  const auto n = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(n) / static_cast<double>(sorted.size());
}

// Rank in the distribution oriented so that the desirable direction is
// increasing; for a decreasing feature this is the rank of -x among the
// negated values.
double oriented_rank(std::span<const double> sorted, double x, Direction d) {
  return d == Direction::kIncreasing ? fraction_at_most(sorted, x)
                                     : fraction_at_least(sorted, x);
}

}  // namespace

double quantile_rank(const Population& ref, std::size_t g, std::size_t k, double x) {
  const auto table = ref.feature_table(g, k);
  if (table.empty()) throw DataError("quantile rank requested for an empty group");
  return fraction_at_most(table, x);
}

double label_rank(const Population& ref, std::size_t g, double y) {
  const auto table = ref.label_table(g);
  if (table.empty()) throw DataError("label rank requested for an empty group");
  return fraction_at_most(table, y);
}

double feature_effort(const Population& ref, const EffortParams& params, std::size_t g,
                      std::size_t k, double from, double to) {
  const auto& f = ref.schema().feature(k);
  if (f.kind.has_levels() && (!ref.schema().admits(k, from) || !ref.schema().admits(k, to))) {
    throw DataError("invalid level index for '" + f.name + "'");
  }
  if (from == to) return 0.0;
  const auto table = ref.feature_table(g, k);
  switch (f.kind.tag) {
    case KindTag::kNumericalMonotone:
    case KindTag::kOrdinalMonotone:
      return std::max(0.0, oriented_rank(table, to, f.kind.direction) -
                               oriented_rank(table, from, f.kind.direction));
    case KindTag::kNumericalNonMonotone:
    case KindTag::kOrdinalNonMonotone:
      return std::abs(fraction_at_most(table, to) - fraction_at_most(table, from));
    case KindTag::kCategorical:
      return f.categorical_cost.value_or(params.categorical_cost);
    case KindTag::kImmutable:
      return kInfinity;
    case KindTag::kConditionallyImmutable: {
      const bool allowed =
          f.kind.direction == Direction::kIncreasing ? to > from : to < from;
      if (!allowed) return kInfinity;
      return std::max(0.0, oriented_rank(table, to, f.kind.direction) -
                               oriented_rank(table, from, f.kind.direction));
    }
  }
  return kInfinity;
}

double total_effort(const Population& ref, const EffortParams& params, std::size_t g,
                    std::span<const double> from, std::span<const double> to) {
  const auto& schema = ref.schema();
  const std::size_t K = schema.size();
  const std::string& group = ref.group_name(g);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double e = feature_effort(ref, params, g, k, from[k], to[k]);
    if (std::isinf(e)) return kInfinity;
    sum += schema.feature(k).weight_for(group) * e;
  }
  return params.base_cost(group) + sum / static_cast<double>(K);
}

double risk_adjusted_benefit(Benefit b, double alpha, double y, double y_hat) {
  const double v = benefit_value(b, y, y_hat);
  if (alpha == 1.0) return v;
  if (v < 0.0 && alpha != std::floor(alpha)) {
    throw std::domain_error("negative benefit raised to a non-integer alpha");
  }
  return std::pow(v, alpha);
}

double reward(const Predictor& h, Benefit b, double alpha, const Individual& from,
              const Individual& to) {
  return risk_adjusted_benefit(b, alpha, to.y, h.predict(to.x)) -
         risk_adjusted_benefit(b, alpha, from.y, h.predict(from.x));
}

UtilityBreakdown utility(const Predictor& h, Benefit b, const EffortParams& params,
                         const Population& ref, const Individual& from,
                         const Individual& to) {
  UtilityBreakdown u;
  u.reward = reward(h, b, params.alpha, from, to);
  u.effort = total_effort(ref, params, from.group, from.x, to.x);
  u.utility = std::isinf(u.effort) ? -kInfinity : u.reward - u.effort;
  return u;
}

}  // namespace effortsim
