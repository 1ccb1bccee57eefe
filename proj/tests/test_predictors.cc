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

#include "effortsim/errors.h"
#include "effortsim/predictor.h"
#include "effortsim/predictors.h"
#include "support.h"

namespace effortsim {
namespace {

using testing::make_population;
using testing::one_feature_schema;

Population line_data() {
  std::vector<std::pair<std::vector<double>, double>> rows;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.5 * i;
    rows.push_back({{static_cast<double>(i % 2), x}, 2.0 * x + 1.0});
  }
  return make_population(one_feature_schema("numerical"), rows);
}

TEST(Linear, RecoversExactLine) {
  const auto pop = line_data();
  const auto h = fit_linear(pop);
  EXPECT_NEAR(h.weights()(h.weights().size() - 1), 2.0, 1e-9);
  EXPECT_NEAR(h.intercept(), 1.0, 1e-9);
  EXPECT_NEAR(evaluate(h, pop).mae_overall, 0.0, 1e-9);
  EXPECT_EQ(h.kind(), "linear");
}

TEST(Linear, SinglePointIsInterpolated) {
  auto schema = testing::schema_from(nlohmann::json::parse(R"({
    "features": [{"name": "sex", "kind": "immutable", "levels": ["F"]},
                 {"name": "f", "kind": "numerical"}],
    "sensitive": "sex", "label": "y"})"));
  const auto pop = make_population(schema, {{{0, 3.0}, 7.0}});
  const auto h = fit_linear(pop);
  EXPECT_NEAR(h.predict(pop[0].x), 7.0, 1e-6);
}

TEST(Linear, BeatsRandomProbes) {
  const auto pop = testing::random_population(17, 30);
  const auto h = fit_linear(pop);
  const double best = mean_squared_error(h, pop);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto probe = testing::random_linear(pop.schema(), 1000 + s);
    EXPECT_LE(best, mean_squared_error(probe, pop) + 1e-9);
  }
  // Small perturbations of the optimum never help either.
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd w = h.weights();
    for (Eigen::Index c = 0; c < w.size(); ++c) w(c) += rng.normal(0.0, 1e-3);
    const LinearModel near(h.encoder(), w, h.intercept() + rng.normal(0.0, 1e-3), "linear");
    EXPECT_LE(best, mean_squared_error(near, pop) + 1e-12);
  }
}

TEST(Ridge, ZeroPenaltyMatchesLinear) {
  const auto pop = testing::random_population(21, 30);
  const auto a = fit_linear(pop), b = fit_ridge(pop, 0.0);
  ASSERT_EQ(a.weights().size(), b.weights().size());
  for (Eigen::Index c = 0; c < a.weights().size(); ++c) {
    EXPECT_NEAR(a.weights()(c), b.weights()(c), 1e-9);
  }
  EXPECT_NEAR(a.intercept(), b.intercept(), 1e-9);
  EXPECT_EQ(fit_ridge(pop, 3.0).kind(), "ridge");
}

TEST(Ridge, HugePenaltyGivesMeanPredictor) {
  const auto pop = testing::random_population(22, 30);
  const auto h = fit_ridge(pop, 1e12);
  double mean = 0;
  for (const auto& ind : pop.individuals()) mean += ind.y / static_cast<double>(pop.size());
  for (const auto& ind : pop.individuals()) EXPECT_NEAR(h.predict(ind.x), mean, 1e-3);
  EXPECT_THROW(fit_ridge(pop, -1.0), ConfigError);
}

TEST(Tree, DepthZeroIsMean) {
  const auto pop = testing::random_population(23, 20);
  const auto h = fit_tree(pop, 0);
  double mean = 0;
  for (const auto& ind : pop.individuals()) mean += ind.y / static_cast<double>(pop.size());
  EXPECT_NEAR(h.predict(pop[0].x), mean, 1e-12);
  EXPECT_EQ(h.depth(), 0);
}

TEST(Tree, TwoPointsSplitIntoTwoLeaves) {
  const auto pop = make_population(one_feature_schema("numerical"),
                                   {{{0, 0.0}, 0.0}, {{1, 1.0}, 1.0}});
  const auto h = fit_tree(pop, 1);
  EXPECT_EQ(h.predict(pop[0].x), 0.0);
  EXPECT_EQ(h.predict(pop[1].x), 1.0);
  EXPECT_EQ(h.nodes().size(), 3u);
}

TEST(Tree, PureNodeDoesNotSplit) {
  const auto pop = make_population(one_feature_schema("numerical"),
                                   {{{0, 0.0}, 4.0}, {{1, 1.0}, 4.0}, {{0, 2.0}, 4.0}});
  EXPECT_EQ(fit_tree(pop, 5).nodes().size(), 1u);
}

TEST(Tree, TrainingErrorNonincreasingInDepth) {
  const auto pop = testing::random_population(24, 30);
  double prev = INFINITY;
  for (int d = 0; d <= 6; ++d) {
    const double mse = mean_squared_error(fit_tree(pop, d), pop);
    EXPECT_LE(mse, prev + 1e-12);
    prev = mse;
  }
}

TEST(Tree, SplitMatchesExhaustiveSearch) {
  // Depth-1 tree on one numeric feature: compare against every midpoint.
  Rng rng(31);
  std::vector<std::pair<std::vector<double>, double>> rows;
  for (int i = 0; i < 15; ++i) {
    rows.push_back({{static_cast<double>(i % 2), std::round(rng.normal() * 4)},
                    std::round(rng.normal() * 5)});
  }
  auto schema = testing::schema_from(nlohmann::json::parse(R"({
    "features": [{"name": "sex", "kind": "immutable", "levels": ["F", "M"]},
                 {"name": "f", "kind": "numerical"}],
    "sensitive": "sex", "label": "y"})"));
  const auto pop = make_population(schema, rows);
  const auto h = fit_tree(pop, 1);
  double best = INFINITY;
  std::vector<double> xs;
  for (const auto& r : rows) xs.push_back(r.first[1]);
  std::sort(xs.begin(), xs.end());
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
    if (xs[t] == xs[t + 1]) continue;
    const double thr = 0.5 * (xs[t] + xs[t + 1]);
    double sl = 0, sr = 0, nl = 0, nr = 0;
    for (const auto& r : rows) (r.first[1] <= thr ? (sl += r.second, nl++) : (sr += r.second, nr++));
    double sse = 0;
    for (const auto& r : rows) {
      const double m = r.first[1] <= thr ? sl / nl : sr / nr;
      sse += (r.second - m) * (r.second - m);
    }
    best = std::min(best, sse);
  }
  // The sex column may do better; the fitted tree must be at least as good.
  EXPECT_LE(mean_squared_error(h, pop) * static_cast<double>(pop.size()), best + 1e-9);
}

TEST(Constrained, ZeroTauIsOls) {
  const auto pop = testing::random_population(40, 30);
  const auto fit = fit_constrained_linear(pop, 0.0, Benefit::kPredictedLabel, 0);
  const auto ols = fit_linear(pop);
  for (Eigen::Index c = 0; c < ols.weights().size(); ++c) {
    EXPECT_EQ(fit.model.weights()(c), ols.weights()(c));
  }
  EXPECT_EQ(fit.model.intercept(), ols.intercept());
  EXPECT_EQ(fit.regime, "unconstrained");
}

TEST(Constrained, GapShrinksAndObjectiveImproves) {
  int active = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto pop = testing::random_population(100 + seed, 30);
    for (std::size_t minority : {0u, 1u}) {
      const auto base = fit_constrained_linear(pop, 0.0, Benefit::kPredictedLabel, minority);
      double prev_gap = base.gap;
      for (double tau : {0.5, 1.0, 5.0, 50.0, 1e4}) {
        const auto fit = fit_constrained_linear(pop, tau, Benefit::kPredictedLabel, minority);
        EXPECT_LE(fit.objective, fit.ols_objective + 1e-9);
        EXPECT_LE(fit.gap, prev_gap + 1e-9);
        EXPECT_GE(tau * std::max(0.0, fit.gap), 0.0);
        EXPECT_TRUE(std::isfinite(fit.objective));
        prev_gap = fit.gap;
        if (fit.regime != "unconstrained") ++active;
        // Subgradient optimality: no small step lowers the objective.
        Rng rng(seed);
        for (int t = 0; t < 20; ++t) {
          Eigen::VectorXd w = fit.model.weights();
          for (Eigen::Index c = 0; c < w.size(); ++c) w(c) += rng.normal(0.0, 1e-4);
          const LinearModel probe(fit.model.encoder(), w, fit.model.intercept(), "linear");
          const auto pred = probe.predict_all(pop);
          double sum[2] = {0, 0};
          for (std::size_t i = 0; i < pop.size(); ++i) sum[pop[i].group] += pred[i];
          const double gap = sum[1 - minority] / static_cast<double>(pop.group_size(1 - minority)) -
                sum[minority] / static_cast<double>(pop.group_size(minority));
          EXPECT_GE(mean_squared_error(probe, pop) + tau * std::max(0.0, gap),
                    fit.objective - 1e-9 * (1 + fit.objective));
        }
      }
    }
  }
  EXPECT_GT(active, 0);
}

TEST(Evaluate, MaeExamples) {
  const auto pop = make_population(one_feature_schema("numerical"),
                                   {{{0, 0.0}, 0.0}, {{1, 1.0}, 2.0}});
  const ConstantModel h(pop.schema().feature_names(), 1.0);
  const auto rep = evaluate(h, pop);
  EXPECT_EQ(rep.mae_overall, 1.0);
  EXPECT_EQ(rep.mae_per_group, (std::vector<double>{1.0, 1.0}));
  const auto line = line_data();
  EXPECT_NEAR(evaluate(fit_linear(line), line).mae_per_group[1], 0.0, 1e-9);
}

TEST(Predictor, JsonRoundTripPredictsIdentically) {
  const auto pop = testing::random_population(50, 30);
  std::vector<std::shared_ptr<const Predictor>> models = {
      std::make_shared<LinearModel>(fit_ridge(pop, 2.0)),
      std::make_shared<TreeModel>(fit_tree(pop, 3)),
      std::make_shared<MlpModel>(fit_mlp(pop, MlpOptions{8, 1.0, 30, 0.01, 3})),
      std::make_shared<ConstantModel>(pop.schema().feature_names(), 2.5)};
  for (const auto& m : models) {
    const auto back = predictor_from_json(nlohmann::json::parse(m->to_json().dump()));
    for (const auto& ind : pop.individuals()) EXPECT_EQ(back->predict(ind.x), m->predict(ind.x));
  }
}

TEST(Predictor, RejectsForeignSchema) {
  const auto pop = testing::random_population(51, 10);
  const auto h = fit_linear(pop);
  const auto other = restrict_features(pop, FeatureFilter::kMutablePlusSensitive);
  EXPECT_THROW(h.predict_all(other), ConfigError);
}

TEST(Mlp, SeededAndDeterministic) {
  const auto pop = testing::random_population(52, 30);
  const MlpOptions opts{16, 10.0, 100, 0.01, 9};
  const auto a = fit_mlp(pop, opts), b = fit_mlp(pop, opts);
  for (const auto& ind : pop.individuals()) {
    EXPECT_EQ(a.predict(ind.x), b.predict(ind.x));
    EXPECT_TRUE(std::isfinite(a.predict(ind.x)));
  }
  // Training lowers the error of the initial mean-only guess.
  const ConstantModel mean(pop.schema().feature_names(), fit_tree(pop, 0).predict(pop[0].x));
  EXPECT_LT(mean_squared_error(a, pop), mean_squared_error(mean, pop));
}

}  // namespace
}  // namespace effortsim
