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

#include "effortsim/dynamics.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "effortsim/errors.h"

namespace effortsim {

Individual imitation_target(const Population& pop, std::size_t i, std::size_t candidate) {
  const auto& schema = pop.schema();
  const auto& self = pop[i];
  const auto& model = pop[candidate];
  Individual target = self;
  for (std::size_t k = 0; k < schema.size(); ++k) {
    if (schema.feature(k).is_mutable || k == schema.sensitive_index()) {
      target.x[k] = model.x[k];
    }
  }
  target.y = model.y;
  target.group = model.group;
  return target;
}

RoleModelChoice select_role_model(const Predictor& h, const Population& pop,
                                  const EffortParams& params, Benefit b, std::size_t i) {
  RoleModelChoice choice;
  bool first = true;
  for (std::size_t j = 0; j < pop.size(); ++j) {
    const auto u = utility(h, b, params, pop, pop[i], imitation_target(pop, i, j));
    if (first || u.utility > choice.best.utility) {
      choice.best = u;
      choice.argmax = j;
      first = false;
    }
  }
  if (!first && choice.best.utility > 0.0) choice.index = choice.argmax;
  return choice;
}

ImpactResult simulate(const Predictor& h, const Population& pop, const EffortParams& params,
                      Benefit b, int threads) {
  h.check_schema(pop.schema());
  params.validate();
  std::vector<ImitationOutcome> outcomes(pop.size());
  parallel_for(
      pop.size(),
      [&](std::size_t i) {
        const auto choice = select_role_model(h, pop, params, b, i);
        auto& o = outcomes[i];
        o.individual_index = i;
        o.exerted = choice.best;
        o.role_model_index = choice.index;
        o.changed = choice.index.has_value();
        if (o.changed) {
          const auto target = imitation_target(pop, i, *choice.index);
          o.new_x = target.x;
          o.new_y = target.y;
        } else {
          o.new_x = pop[i].x;
          o.new_y = pop[i].y;
        }
      },
      threads);

  std::vector<Individual> rows;
  rows.reserve(pop.size());
  const auto mutable_idx = pop.schema().mutable_indices();
  std::vector<FocalPoint> focal;
  std::map<std::vector<double>, std::size_t> focal_index;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Individual ind = pop[i];
    ind.x = outcomes[i].new_x;
    ind.y = outcomes[i].new_y;
    rows.push_back(std::move(ind));
    if (!outcomes[i].changed) continue;
    std::vector<double> key;
    key.reserve(mutable_idx.size());
    for (auto k : mutable_idx) key.push_back(outcomes[i].new_x[k]);
    auto [it, inserted] = focal_index.try_emplace(key, focal.size());
    if (inserted) focal.push_back({key, 0, i});
    ++focal[it->second].imitators;
  }
  return {std::move(outcomes), pop.with_individuals(std::move(rows)), std::move(focal)};
}

nlohmann::json ImpactResult::to_json(const Population& original) const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& o : outcomes) {
    auto opt = [](double v) {
      return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : "-inf");
    };
    rows.push_back({{"individual", o.individual_index},
                    {"row_id", original[o.individual_index].row_id},
                    {"role_model", o.role_model_index ? nlohmann::json(*o.role_model_index)
                                                      : nlohmann::json(nullptr)},
                    {"changed", o.changed},
                    {"reward", opt(o.exerted.reward)},
                    {"effort", opt(o.exerted.effort)},
                    {"utility", opt(o.exerted.utility)},
                    {"new_y", o.new_y}});
  }
  nlohmann::json focal = nlohmann::json::array();
  for (const auto& f : focal_points) {
    focal.push_back({{"values", f.values},
                     {"imitators", f.imitators},
                     {"first_imitator", f.first_imitator}});
  }
  std::size_t changed = 0;
  for (const auto& o : outcomes) changed += o.changed ? 1 : 0;
  return {{"outcomes", rows},
          {"focal_points", focal},
          {"changed", changed},
          {"label_convention", "role_model_label"},
          {"rounds", 1}};
}

namespace {

DistributionSummary summarize(const std::vector<double>& values, std::size_t bins, double lo,
                              double hi, bool levelled) {
  DistributionSummary s;
  s.histogram.assign(bins, 0);
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  for (double v : values) s.variance += (v - s.mean) * (v - s.mean);
  s.variance /= static_cast<double>(values.size());
  for (double v : values) {
    std::size_t bin;
    if (levelled) {
      bin = static_cast<std::size_t>(v);
    } else if (hi > lo) {
      bin = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
      bin = std::min(bin, bins - 1);
    } else {
      bin = 0;
    }
    ++s.histogram[bin];
  }
  return s;
}

}  // namespace

std::vector<FeatureShift> feature_shift_report(const Population& original,
                                               const Population& impacted, std::size_t bins) {
  if (!(original.schema() == impacted.schema())) {
    throw ConfigError("feature shift report needs populations with the same schema");
  }
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  const auto& schema = original.schema();
  std::vector<FeatureShift> out;
  for (std::size_t k = 0; k < schema.size(); ++k) {
    const auto& f = schema.feature(k);
    const bool levelled = f.kind.has_levels();
    double lo = kInfinity, hi = -kInfinity;
    for (const auto* pop : {&original, &impacted}) {
      for (const auto& ind : pop->individuals()) {
        lo = std::min(lo, ind.x[k]);
        hi = std::max(hi, ind.x[k]);
      }
    }
    const std::size_t nbins = levelled ? f.kind.levels.size() : bins;
    for (std::size_t g = 0; g < original.group_count(); ++g) {
      FeatureShift shift;
      shift.feature = f.name;
      shift.group = original.group_name(g);
      if (levelled) {
        shift.levels = f.kind.levels;
      } else {
        for (std::size_t e = 0; e <= nbins; ++e) {
          shift.bin_edges.push_back(e == nbins ? hi
                                               : lo + (hi - lo) * static_cast<double>(e) /
                                                          static_cast<double>(nbins));
        }
      }
      auto column = [&](const Population& pop) {
        std::vector<double> v;
        for (const auto& ind : pop.individuals()) {
          if (ind.group == g) v.push_back(ind.x[k]);
        }
        return v;
      };
      shift.before = summarize(column(original), nbins, lo, hi, levelled);
      shift.after = summarize(column(impacted), nbins, lo, hi, levelled);
      out.push_back(std::move(shift));
    }
  }
  return out;
}

nlohmann::json feature_shift_json(const std::vector<FeatureShift>& shifts) {
  nlohmann::json out = nlohmann::json::array();
  auto summary = [](const DistributionSummary& s) {
    return nlohmann::json{{"mean", s.mean}, {"variance", s.variance}, {"histogram", s.histogram}};
  };
  for (const auto& s : shifts) {
    nlohmann::json j = {{"feature", s.feature},
                        {"group", s.group},
                        {"before", summary(s.before)},
                        {"after", summary(s.after)}};
    if (s.levels.empty()) {
      j["bin_edges"] = s.bin_edges;
    } else {
      j["levels"] = s.levels;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace effortsim
