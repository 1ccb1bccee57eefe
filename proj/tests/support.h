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

// Fixtures and brute-force reference implementations shared by the unit
// tests and the acceptance binary. The oracles scan raw individuals instead
// of the sorted tables and never call the library's effort or search code.

#ifndef EFFORTSIM_TESTS_SUPPORT_H_
#define EFFORTSIM_TESTS_SUPPORT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "effortsim/dataset.h"
#include "effortsim/effort.h"
#include "effortsim/predictor.h"
#include "effortsim/random.h"
#include "effortsim/schema.h"
#include "json.hpp"

namespace effortsim::testing {

inline std::shared_ptr<const FeatureSchema> schema_from(const nlohmann::json& j) {
  return std::make_shared<const FeatureSchema>(FeatureSchema::from_json(j));
}

// Sensitive "sex" plus one feature of every kind.
inline std::shared_ptr<const FeatureSchema> mixed_schema() {
  return schema_from(nlohmann::json::parse(R"({
    "features": [
      {"name": "sex", "kind": "immutable", "levels": ["F", "M"]},
      {"name": "study", "kind": "ordinal_monotone", "direction": "increasing", "range": [1, 5]},
      {"name": "absences", "kind": "numerical_monotone", "direction": "decreasing"},
      {"name": "goout", "kind": "ordinal", "range": [1, 5]},
      {"name": "club", "kind": "categorical", "levels": ["a", "b", "c"]},
      {"name": "age", "kind": "conditionally_immutable", "direction": "increasing"},
      {"name": "score", "kind": "numerical"}
    ],
    "sensitive": "sex", "label": "y"})"));
}

// Single numeric mutable feature next to the sensitive attribute.
inline std::shared_ptr<const FeatureSchema> one_feature_schema(const std::string& kind,
                                                                const std::string& dir = "") {
  nlohmann::json f = {{"name", "f"}, {"kind", kind}};
  if (!dir.empty()) f["direction"] = dir;
  return schema_from({{"features",
                       {{{"name", "sex"}, {"kind", "immutable"}, {"levels", {"F", "M"}}}, f}},
                      {"sensitive", "sex"},
                      {"label", "y"}});
}

inline Population make_population(std::shared_ptr<const FeatureSchema> schema,
                                  const std::vector<std::pair<std::vector<double>, double>>& rows) {
  std::vector<Individual> out;
  const auto s = schema->sensitive_index();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back({rows[i].first, rows[i].second,
                   static_cast<std::size_t>(rows[i].first[s]), i});
  }
  return Population(std::move(schema), std::move(out));
}

// Small random population over mixed_schema() with many ties; both groups
// are always present.
inline Population random_population(std::uint64_t seed, std::size_t n) {
  auto schema = mixed_schema();
  Rng rng(seed);
  std::vector<std::pair<std::vector<double>, double>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double sex = i < 2 ? static_cast<double>(i) : static_cast<double>(rng.index(2));
    std::vector<double> x = {sex,
                             1.0 + static_cast<double>(rng.index(5)),
                             static_cast<double>(rng.index(8)),
                             1.0 + static_cast<double>(rng.index(5)),
                             static_cast<double>(rng.index(3)),
                             15.0 + static_cast<double>(rng.index(4)),
                             std::round(rng.normal(0.0, 2.0) * 4.0) / 4.0};
    rows.emplace_back(std::move(x), static_cast<double>(rng.index(21)));
  }
  return make_population(schema, rows);
}

inline LinearModel random_linear(const FeatureSchema& schema, std::uint64_t seed) {
  DesignEncoder enc(schema);
  Rng rng(seed);
  Eigen::VectorXd w(static_cast<Eigen::Index>(enc.width()));
  for (Eigen::Index c = 0; c < w.size(); ++c) w(c) = rng.normal(0.0, 1.5);
  return LinearModel(enc, w, rng.normal(10.0, 2.0), "linear");
}

// Equal infinities compare equal; finite values within tol.
inline bool near(double a, double b, double tol) { return a == b || std::fabs(a - b) <= tol; }

inline bool near(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  if (!a || !b) return a.has_value() == b.has_value();
  return near(*a, *b, tol);
}

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double rank_le(const Population& ref, std::size_t g, std::size_t k, double v) {
  double n = 0, c = 0;
  for (const auto& ind : ref.individuals()) {
    if (ind.group != g) continue;
    ++n;
    if (ind.x[k] <= v) ++c;
  }
  return c / n;
}

inline double rank_ge(const Population& ref, std::size_t g, std::size_t k, double v) {
  double n = 0, c = 0;
  for (const auto& ind : ref.individuals()) {
    if (ind.group != g) continue;
    ++n;
    if (ind.x[k] >= v) ++c;
  }
  return c / n;
}

inline double label_rank(const Population& ref, std::size_t g, double y) {
  double n = 0, c = 0;
  for (const auto& ind : ref.individuals()) {
    if (ind.group != g) continue;
    ++n;
    if (ind.y <= y) ++c;
  }
  return c / n;
}

inline double effort(const Population& ref, const EffortParams& p, std::size_t g, std::size_t k,
                     double a, double b) {
  if (a == b) return 0.0;
  const auto& f = ref.schema().feature(k);
  const bool inc = f.kind.direction == Direction::kIncreasing;
  auto monotone = [&] {
    const double d = inc ? oracle::rank_le(ref, g, k, b) - oracle::rank_le(ref, g, k, a)
                         : oracle::rank_ge(ref, g, k, b) - oracle::rank_ge(ref, g, k, a);
    return d > 0 ? d : 0.0;
  };
  switch (f.kind.tag) {
    case KindTag::kNumericalMonotone:
    case KindTag::kOrdinalMonotone:
      return monotone();
    case KindTag::kNumericalNonMonotone:
    case KindTag::kOrdinalNonMonotone:
      return std::fabs(oracle::rank_le(ref, g, k, b) - oracle::rank_le(ref, g, k, a));
    case KindTag::kCategorical:
      return f.categorical_cost ? *f.categorical_cost : p.categorical_cost;
    case KindTag::kImmutable:
      return kInf;
    case KindTag::kConditionallyImmutable:
      if (inc ? b < a : b > a) return kInf;
      return monotone();
  }
  return kInf;
}

inline double total_effort(const Population& ref, const EffortParams& p, std::size_t g,
                           const std::vector<double>& a, const std::vector<double>& b) {
  const auto& schema = ref.schema();
  double sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double e = oracle::effort(ref, p, g, k, a[k], b[k]);
    if (e == kInf) return kInf;
    sum += schema.feature(k).weight_for(ref.group_name(g)) * e;
  }
  return p.base_cost(ref.group_name(g)) + sum / static_cast<double>(a.size());
}

// Predicted-label benefit raised to alpha.
inline double benefit(const Predictor& h, const EffortParams& p, const Individual& z) {
  return std::pow(h.predict(z.x), p.alpha);
}

struct GroupMeans {
  std::vector<std::optional<double>> mean;
  std::vector<double> feasibility;
};

inline GroupMeans bounded_effort(const Predictor& h, const Population& pop, const EffortParams& p,
                                 double delta) {
  const auto G = pop.group_count();
  std::vector<double> sum(G, 0), cnt(G, 0);
  for (const auto& zi : pop.individuals()) {
    double best = 0;
    bool any = false;
    for (const auto& zj : pop.individuals()) {
      const double e = oracle::total_effort(pop, p, zi.group, zi.x, zj.x);
      if (e == kInf || e > delta) continue;
      const double r = oracle::benefit(h, p, zj) - oracle::benefit(h, p, zi);
      if (!any || r > best) best = r;
      any = true;
    }
    sum[zi.group] += best;
    cnt[zi.group] += 1;
  }
  GroupMeans out;
  for (std::size_t g = 0; g < G; ++g) out.mean.push_back(sum[g] / cnt[g]);
  return out;
}

inline GroupMeans threshold_reward(const Predictor& h, const Population& pop,
                                   const EffortParams& p, double delta) {
  const auto G = pop.group_count();
  std::vector<double> sum(G, 0), feasible(G, 0), cnt(G, 0);
  for (const auto& zi : pop.individuals()) {
    double best = kInf;
    for (const auto& zj : pop.individuals()) {
      const double e = oracle::total_effort(pop, p, zi.group, zi.x, zj.x);
      if (e == kInf) continue;
      if (oracle::benefit(h, p, zj) - oracle::benefit(h, p, zi) >= delta) best = std::min(best, e);
    }
    cnt[zi.group] += 1;
    if (best < kInf) {
      sum[zi.group] += best;
      feasible[zi.group] += 1;
    }
  }
  GroupMeans out;
  for (std::size_t g = 0; g < G; ++g) {
    out.mean.push_back(feasible[g] > 0 ? std::optional<double>(sum[g] / feasible[g])
                                       : std::nullopt);
    out.feasibility.push_back(feasible[g] / cnt[g]);
  }
  return out;
}

inline GroupMeans effort_reward(const Predictor& h, const Population& pop, const EffortParams& p) {
  const auto G = pop.group_count();
  std::vector<double> sum(G, 0), cnt(G, 0);
  for (const auto& zi : pop.individuals()) {
    double best = 0;
    for (const auto& zj : pop.individuals()) {
      const double e = oracle::total_effort(pop, p, zi.group, zi.x, zj.x);
      if (e == kInf) continue;
      best = std::max(best, oracle::benefit(h, p, zj) - oracle::benefit(h, p, zi) - e);
    }
    sum[zi.group] += best;
    cnt[zi.group] += 1;
  }
  GroupMeans out;
  for (std::size_t g = 0; g < G; ++g) out.mean.push_back(sum[g] / cnt[g]);
  return out;
}

// Exhaustive role-model search: (argmax candidate, its utility).
inline std::pair<std::size_t, double> role_model(const Predictor& h, const Population& pop,
                                                 const EffortParams& p, std::size_t i) {
  const auto& schema = pop.schema();
  const auto& zi = pop[i];
  std::size_t best = pop.size();
  double best_u = -kInf;
  for (std::size_t j = 0; j < pop.size(); ++j) {
    Individual target = zi;
    for (std::size_t k = 0; k < schema.size(); ++k) {
      if (schema.feature(k).is_mutable || k == schema.sensitive_index()) {
        target.x[k] = pop[j].x[k];
      }
    }
    const double e = oracle::total_effort(pop, p, zi.group, zi.x, target.x);
    const double u = e == kInf ? -kInf : oracle::benefit(h, p, target) - oracle::benefit(h, p, zi) - e;
    if (best == pop.size() || u > best_u) {
      best = j;
      best_u = u;
    }
  }
  return {best, best_u};
}

inline double distance(const Population& ref, const EffortParams& p, const Individual& a,
                       const Individual& b) {
  double d = 0;
  for (std::size_t s = 0; s < ref.group_count(); ++s) {
    double ds = std::max(0.0, oracle::label_rank(ref, s, b.y) - oracle::label_rank(ref, s, a.y));
    for (std::size_t k = 0; k < ref.schema().size(); ++k) {
      if (ref.schema().feature(k).is_mutable) ds += oracle::effort(ref, p, s, k, a.x[k], b.x[k]);
    }
    d = std::max(d, ds);
  }
  return d;
}

// ACI evaluated term by term from a distance matrix.
inline std::optional<double> aci(const std::vector<std::vector<double>>& d,
                                 const std::vector<bool>& minority) {
  const double n = static_cast<double>(d.size());
  double m = 0;
  for (bool b : minority) m += b;
  double a = 0, b2 = 0, c = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double cij = std::exp(-d[i][j]);
      a += cij * (minority[i] / m) * minority[j];
      b2 += cij * (1 / n) * (m / n);
      c += cij * (minority[i] / m);
    }
  }
  if (c - b2 == 0) return std::nullopt;
  return (a - b2) / (c - b2);
}

// Nearest focal point by mutable effort in the individual's own group.
inline std::vector<std::size_t> focal_assignment(const Population& ref, const EffortParams& p,
                                                 const std::vector<std::vector<double>>& focal,
                                                 const Population& pop) {
  std::vector<std::size_t> mut;
  for (std::size_t k = 0; k < ref.schema().size(); ++k) {
    if (ref.schema().feature(k).is_mutable) mut.push_back(k);
  }
  std::vector<std::size_t> out;
  for (const auto& z : pop.individuals()) {
    std::size_t best = 0;
    double best_d = kInf;
    for (std::size_t f = 0; f < focal.size(); ++f) {
      double d = 0;
      for (std::size_t m = 0; m < mut.size(); ++m) {
        d += oracle::effort(ref, p, z.group, mut[m], z.x[mut[m]], focal[f][m]);
      }
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace oracle
}  // namespace effortsim::testing

#endif  // EFFORTSIM_TESTS_SUPPORT_H_
