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

#include "effortsim/fairness.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "effortsim/csv.h"
#include "effortsim/errors.h"

namespace effortsim {

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::kBoundedEffort:
      return "bounded_effort";
    case Measure::kThresholdReward:
      return "threshold_reward";
    case Measure::kEffortReward:
      return "effort_reward";
    case Measure::kPositiveResidualDiff:
      return "positive_residual_diff";
    case Measure::kNegativeResidualDiff:
      return "negative_residual_diff";
  }
  return "unknown";
}

std::optional<double> disparity(const std::vector<std::optional<double>>& values) {
  if (values.empty()) return std::nullopt;
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& v : values) {
    if (!v) return std::nullopt;
    lo = std::min(lo, *v);
    hi = std::max(hi, *v);
  }
  return values.size() == 1 ? 0.0 : hi - lo;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// Group means of per-individual values; absent entries are skipped.
std::vector<std::optional<double>> group_means(const PairwiseTables& t,
                                               const std::vector<std::optional<double>>& v,
                                               std::vector<double>* feasibility) {
  const std::size_t G = t.group_count();
  std::vector<double> sum(G, 0.0);
  std::vector<std::size_t> count(G, 0), members(G, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    ++members[t.group(i)];
    if (!v[i]) continue;
    sum[t.group(i)] += *v[i];
    ++count[t.group(i)];
  }
  std::vector<std::optional<double>> out(G);
  if (feasibility) feasibility->assign(G, 0.0);
  for (std::size_t g = 0; g < G; ++g) {
    if (count[g] > 0) out[g] = sum[g] / static_cast<double>(count[g]);
    if (feasibility && members[g] > 0) {
      (*feasibility)[g] = static_cast<double>(count[g]) / static_cast<double>(members[g]);
    }
  }
  return out;
}

std::vector<std::optional<double>> wrap(const std::vector<double>& v) {
  return std::vector<std::optional<double>>(v.begin(), v.end());
}

UnfairnessReport make_report(Measure m, std::optional<double> delta,
                             const std::vector<std::string>& names,
                             std::vector<std::optional<double>> per_group) {
  UnfairnessReport r;
  r.measure = m;
  r.delta = delta;
  r.group_names = names;
  r.disparity = disparity(per_group);
  r.per_group = std::move(per_group);
  return r;
}

}  // namespace

nlohmann::json UnfairnessReport::to_json() const {
  nlohmann::json groups = nlohmann::json::object();
  for (std::size_t g = 0; g < group_names.size(); ++g) {
    groups[group_names[g]] = optional_json(per_group[g]);
  }
  nlohmann::json j = {{"measure", measure_name(measure)},
                      {"per_group", groups},
                      {"disparity", optional_json(disparity)}};
  if (delta) j["delta"] = std::isinf(*delta) ? nlohmann::json("inf") : nlohmann::json(*delta);
  if (!feasibility.empty()) {
    nlohmann::json f = nlohmann::json::object();
    for (std::size_t g = 0; g < group_names.size(); ++g) f[group_names[g]] = feasibility[g];
    j["feasibility"] = f;
  }
  return j;
}

PairwiseTables::PairwiseTables(const Predictor& h, const Population& pop,
                               const EffortParams& params, Benefit b, int threads)
    : n_(pop.size()), group_names_(pop.schema().groups()) {
  params.validate();
  const auto pred = h.predict_all(pop);
  adjusted_.resize(n_);
  groups_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    adjusted_[i] = risk_adjusted_benefit(b, params.alpha, pop[i].y, pred[i]);
    groups_[i] = pop[i].group;
  }
  effort_.resize(n_ * n_);
  parallel_for(
      n_,
      [&](std::size_t i) {
        for (std::size_t j = 0; j < n_; ++j) {
          effort_[i * n_ + j] = total_effort(pop, params, pop[i].group, pop[i].x, pop[j].x);
        }
      },
      threads);
}

double PairwiseTables::max_finite_effort() const {
  double best = 0.0;
  for (double e : effort_) {
    if (std::isfinite(e)) best = std::max(best, e);
  }
  return best;
}

double PairwiseTables::max_reward() const {
  if (adjusted_.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(adjusted_.begin(), adjusted_.end());
  return *hi - *lo;
}

std::vector<double> bounded_effort_values(const PairwiseTables& t, double delta) {
  if (!(delta >= 0.0)) throw ConfigError("bounded-effort delta must be >= 0");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool any = false;
    double best = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double e = t.effort(i, j);
      if (std::isinf(e) || !(e <= delta)) continue;
      const double r = t.reward(i, j);
      if (!any || r > best) best = r;
      any = true;
    }
    out[i] = any ? best : 0.0;
  }
  return out;
}

std::vector<std::optional<double>> threshold_reward_values(const PairwiseTables& t,
                                                           double delta) {
  if (!std::isfinite(delta)) throw ConfigError("threshold-reward delta must be finite");
  std::vector<std::optional<double>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double e = t.effort(i, j);
      if (std::isinf(e) || !(t.reward(i, j) >= delta)) continue;
      if (!out[i] || e < *out[i]) out[i] = e;
    }
  }
  return out;
}

std::vector<double> effort_reward_values(const PairwiseTables& t) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    double best = 0.0;  // staying put
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double e = t.effort(i, j);
      if (std::isinf(e)) continue;
      best = std::max(best, t.reward(i, j) - e);
    }
    out[i] = best;
  }
  return out;
}

UnfairnessReport bounded_effort(const PairwiseTables& t, double delta) {
  return make_report(Measure::kBoundedEffort, delta, t.group_names(),
                     group_means(t, wrap(bounded_effort_values(t, delta)), nullptr));
}

UnfairnessReport threshold_reward(const PairwiseTables& t, double delta) {
  std::vector<double> feasibility;
  auto means = group_means(t, threshold_reward_values(t, delta), &feasibility);
  auto r = make_report(Measure::kThresholdReward, delta, t.group_names(), std::move(means));
  r.feasibility = std::move(feasibility);
  return r;
}

UnfairnessReport effort_reward(const PairwiseTables& t) {
  return make_report(Measure::kEffortReward, std::nullopt, t.group_names(),
                     group_means(t, wrap(effort_reward_values(t)), nullptr));
}

UnfairnessReport bounded_effort(const Predictor& h, const Population& pop,
                                const EffortParams& params, Benefit b, double delta) {
  return bounded_effort(PairwiseTables(h, pop, params, b), delta);
}

UnfairnessReport threshold_reward(const Predictor& h, const Population& pop,
                                  const EffortParams& params, Benefit b, double delta) {
  return threshold_reward(PairwiseTables(h, pop, params, b), delta);
}

UnfairnessReport effort_reward(const Predictor& h, const Population& pop,
                               const EffortParams& params, Benefit b) {
  return effort_reward(PairwiseTables(h, pop, params, b));
}

std::pair<UnfairnessReport, UnfairnessReport> residual_differences(const Predictor& h,
                                                                   const Population& pop) {
  const auto pred = h.predict_all(pop);
  const std::size_t G = pop.group_count();
  std::vector<double> pos_sum(G, 0.0), neg_sum(G, 0.0);
  std::vector<std::size_t> pos_n(G, 0), neg_n(G, 0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double r = pred[i] - pop[i].y;
    const std::size_t g = pop[i].group;
    if (r > 0.0) {
      pos_sum[g] += r;
      ++pos_n[g];
    } else if (r < 0.0) {
      neg_sum[g] += -r;
      ++neg_n[g];
    }
  }
  std::vector<std::optional<double>> pos(G), neg(G);
  for (std::size_t g = 0; g < G; ++g) {
    if (pos_n[g] > 0) pos[g] = pos_sum[g] / static_cast<double>(pos_n[g]);
    if (neg_n[g] > 0) neg[g] = neg_sum[g] / static_cast<double>(neg_n[g]);
  }
  const auto& names = pop.schema().groups();
  return {make_report(Measure::kPositiveResidualDiff, std::nullopt, names, std::move(pos)),
          make_report(Measure::kNegativeResidualDiff, std::nullopt, names, std::move(neg))};
}

DeltaCurve sweep_delta(Measure measure, const PairwiseTables& t,
                       const std::vector<double>& grid) {
  if (measure != Measure::kBoundedEffort && measure != Measure::kThresholdReward) {
    throw ConfigError("only bounded-effort and threshold-reward can be swept over delta");
  }
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw ConfigError("delta grid must be sorted ascending");
  }
  DeltaCurve curve;
  curve.measure = measure;
  curve.deltas = grid;
  curve.group_names = t.group_names();
  const std::size_t G = t.group_count();
  curve.values.assign(G, {});
  if (measure == Measure::kThresholdReward) curve.feasibility.assign(G, {});
  for (double delta : grid) {
    const auto report =
        measure == Measure::kBoundedEffort ? bounded_effort(t, delta) : threshold_reward(t, delta);
    for (std::size_t g = 0; g < G; ++g) {
      curve.values[g].push_back(report.per_group[g]);
      if (measure == Measure::kThresholdReward) {
        curve.feasibility[g].push_back(report.feasibility[g]);
      }
    }
  }
  return curve;
}

DeltaCurve sweep_delta(Measure measure, const Predictor& h, const Population& pop,
                       const EffortParams& params, Benefit b,
                       const std::vector<double>& grid) {
  return sweep_delta(measure, PairwiseTables(h, pop, params, b), grid);
}

void DeltaCurve::write_csv_rows(std::ostream& out, std::string_view model) const {
  for (std::size_t g = 0; g < group_names.size(); ++g) {
    for (std::size_t t = 0; t < deltas.size(); ++t) {
      std::vector<std::string> row = {std::string(model), csv::format_double(deltas[t]),
                                      group_names[g],
                                      values[g][t] ? csv::format_double(*values[g][t]) : ""};
      if (!feasibility.empty()) row.push_back(csv::format_double(feasibility[g][t]));
      csv::write_row(out, row);
    }
  }
}

std::vector<double> linear_grid(double hi, std::size_t points) {
  std::vector<double> grid;
  if (points == 0) return grid;
  if (points == 1) return {0.0};
  for (std::size_t t = 0; t < points; ++t) {
    grid.push_back(t + 1 == points ? hi
                                   : hi * static_cast<double>(t) / static_cast<double>(points - 1));
  }
  return grid;
}

}  // namespace effortsim
