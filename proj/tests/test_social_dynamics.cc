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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "effortsim/dynamics.h"
#include "effortsim/predictors.h"
#include "support.h"

namespace effortsim {
namespace {

using testing::make_population;
namespace oracle = testing::oracle;

// h(x) = slope * f over the one-feature schema.
LinearModel slope_model(const Population& pop, double slope) {
  DesignEncoder enc(pop.schema());
  Eigen::VectorXd w(2);
  w << 0.0, slope;
  return LinearModel(enc, w, 0.0, "linear");
}

std::string csv_of(const Population& pop) {
  std::ostringstream out;
  write_csv(pop, out);
  return out.str();
}

TEST(RoleModel, ConstantPredictorSelectsNobody) {
  const auto pop = testing::random_population(1, 25);
  const ConstantModel h(pop.schema().feature_names(), 10.0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto c = select_role_model(h, pop, EffortParams{}, Benefit::kPredictedLabel, i);
    EXPECT_FALSE(c.index.has_value());
    EXPECT_LE(c.best.utility, 0.0);
  }
  const auto impact = simulate(h, pop, EffortParams{}, Benefit::kPredictedLabel);
  EXPECT_EQ(csv_of(impact.impacted), csv_of(pop));
  EXPECT_TRUE(impact.focal_points.empty());
}

TEST(RoleModel, ThreeIndividualToy) {
  const auto pop = make_population(testing::one_feature_schema("numerical_monotone", "increasing"),
                                   {{{0, 1.0}, 0}, {{0, 2.0}, 0}, {{0, 3.0}, 0}, {{1, 1.0}, 0}});
  const auto h = slope_model(pop, 2.0);
  const auto c = select_role_model(h, pop, EffortParams{}, Benefit::kPredictedLabel, 0);
  ASSERT_TRUE(c.index.has_value());
  EXPECT_EQ(*c.index, 2u);
  // Reward 4, effort (1 - 1/3) / 2.
  EXPECT_DOUBLE_EQ(c.best.utility, 4.0 - 1.0 / 3.0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto got = select_role_model(h, pop, EffortParams{}, Benefit::kPredictedLabel, i);
    const auto [j, u] = oracle::role_model(h, pop, EffortParams{}, i);
    EXPECT_EQ(got.argmax, j);
    EXPECT_NEAR(got.best.utility, u, 1e-12);
  }
}

TEST(RoleModel, OtherGroupIsNeverChosen) {
  const auto pop = make_population(testing::one_feature_schema("numerical"),
                                   {{{0, 1.0}, 0}, {{0, 1.5}, 0}, {{1, 100.0}, 0}});
  const auto h = slope_model(pop, 1.0);
  const auto c = select_role_model(h, pop, EffortParams{}, Benefit::kPredictedLabel, 0);
  EXPECT_NE(c.argmax, 2u);
  const auto target = imitation_target(pop, 0, 2);
  EXPECT_EQ(utility(h, Benefit::kPredictedLabel, EffortParams{}, pop, pop[0], target).utility,
            -kInfinity);
}

TEST(RoleModel, TiesGoToLowestIndex) {
  const auto pop = make_population(testing::one_feature_schema("numerical"),
                                   {{{0, 1.0}, 0}, {{0, 5.0}, 0}, {{0, 5.0}, 0}, {{1, 1.0}, 0}});
  const auto h = slope_model(pop, 3.0);
  EXPECT_EQ(select_role_model(h, pop, EffortParams{}, Benefit::kPredictedLabel, 0).argmax, 1u);
}

TEST(Simulate, SingleImitatorGivesOneFocalPoint) {
  const auto pop = make_population(testing::one_feature_schema("numerical_monotone", "increasing"),
                                   {{{0, 1.0}, 3}, {{0, 2.0}, 7}, {{1, 1.0}, 5}});
  const auto h = slope_model(pop, 1.0);
  const auto impact = simulate(h, pop, EffortParams{}, Benefit::kPredictedLabel);
  ASSERT_EQ(impact.focal_points.size(), 1u);
  EXPECT_EQ(impact.focal_points[0].imitators, 1u);
  EXPECT_EQ(impact.focal_points[0].first_imitator, 0u);
  EXPECT_EQ(impact.focal_points[0].values, (std::vector<double>{2.0}));
  EXPECT_TRUE(impact.outcomes[0].changed);
  EXPECT_DOUBLE_EQ(impact.outcomes[0].exerted.utility, 0.75);
  EXPECT_EQ(impact.impacted[0].x[1], 2.0);
  EXPECT_EQ(impact.impacted[0].y, 7.0);  // adopts the role model's label
  EXPECT_FALSE(impact.outcomes[1].changed);
  EXPECT_FALSE(impact.outcomes[2].changed);
}

TEST(Simulate, InvariantsAgainstExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const auto pop = testing::random_population(500 + seed, 4 + rng.index(27));
    const auto h = testing::random_linear(pop.schema(), 600 + seed);
    const EffortParams p;
    const auto impact = simulate(h, pop, p, Benefit::kPredictedLabel);
    ASSERT_EQ(impact.impacted.size(), pop.size());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const auto& o = impact.outcomes[i];
      const auto [j, u] = oracle::role_model(h, pop, p, i);
      EXPECT_NEAR(o.exerted.utility, u, 1e-10);
      EXPECT_EQ(o.changed, u > 0.0);
      EXPECT_EQ(o.changed, o.role_model_index.has_value());
      if (o.changed) {
        ++changed;
        EXPECT_EQ(*o.role_model_index, j);
        const auto& after = impact.impacted[i];
        const double e = oracle::total_effort(pop, p, pop[i].group, pop[i].x, after.x);
        EXPECT_GT(h.predict(after.x), h.predict(pop[i].x) + e - 1e-12);
        EXPECT_GT(h.predict(after.x), h.predict(pop[i].x));
        const auto again = utility(h, Benefit::kPredictedLabel, p, pop, pop[i], after);
        EXPECT_EQ(again.utility, o.exerted.utility);
      } else {
        EXPECT_EQ(impact.impacted[i].x, pop[i].x);
        EXPECT_EQ(impact.impacted[i].y, pop[i].y);
      }
      EXPECT_EQ(impact.impacted[i].group, pop[i].group);
      for (std::size_t k = 0; k < pop.schema().size(); ++k) {
        if (!pop.schema().feature(k).is_mutable) {
          EXPECT_EQ(impact.impacted[i].x[k], pop[i].x[k]);
        }
      }
    }
    std::size_t counted = 0;
    for (const auto& f : impact.focal_points) {
      EXPECT_GE(f.imitators, 1u);
      counted += f.imitators;
    }
    EXPECT_EQ(counted, changed);
  }
}

TEST(Simulate, ThreadCountDoesNotChangeResults) {
  const auto pop = testing::random_population(77, 30);
  const auto h = testing::random_linear(pop.schema(), 78);
  const auto a = simulate(h, pop, EffortParams{}, Benefit::kPredictedLabel, 1);
  const auto b = simulate(h, pop, EffortParams{}, Benefit::kPredictedLabel, 3);
  EXPECT_EQ(csv_of(a.impacted), csv_of(b.impacted));
  EXPECT_EQ(a.to_json(pop).dump(), b.to_json(pop).dump());
}

TEST(FeatureShift, IdenticalPopulations) {
  const auto pop = testing::random_population(3, 20);
  for (const auto& s : feature_shift_report(pop, pop)) {
    EXPECT_EQ(s.before.mean, s.after.mean);
    EXPECT_EQ(s.before.variance, s.after.variance);
    EXPECT_EQ(s.before.histogram, s.after.histogram);
  }
}

TEST(FeatureShift, SingleMoveShiftsMean) {
  const auto pop = make_population(testing::one_feature_schema("numerical"),
                                   {{{0, 1.0}, 0}, {{0, 2.0}, 0}, {{0, 4.0}, 0}, {{1, 1.0}, 0}});
  std::vector<Individual> rows(pop.individuals().begin(), pop.individuals().end());
  rows[0].x[1] = 3.0;
  const auto moved = pop.with_individuals(rows);
  const auto shifts = feature_shift_report(pop, moved);
  for (const auto& s : shifts) {
    const std::size_t g = s.group == "F" ? 0 : 1;
    std::size_t before = 0, after = 0;
    for (auto c : s.before.histogram) before += c;
    for (auto c : s.after.histogram) after += c;
    EXPECT_EQ(before, pop.group_size(g));
    EXPECT_EQ(after, pop.group_size(g));
    if (s.feature == "f" && g == 0) {
      EXPECT_DOUBLE_EQ(s.after.mean - s.before.mean, 2.0 / 3.0);
    }
  }
  EXPECT_EQ(feature_shift_json(shifts).size(), shifts.size());
}

}  // namespace
}  // namespace effortsim
