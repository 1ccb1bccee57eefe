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

#ifndef EFFORTSIM_PREDICTORS_H_
#define EFFORTSIM_PREDICTORS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "effortsim/dataset.h"
#include "effortsim/effort.h"
#include "effortsim/predictor.h"
#include "json.hpp"

namespace effortsim {

// Ordinary least squares with an intercept, solved through the normal
// equations. Rank-deficient designs get a 1e-8 diagonal jitter, recorded in
// the hyperparameters as "jitter".
LinearModel fit_linear(const Population& pop);

// Ridge with an unpenalized intercept. lambda = 0 runs the same arithmetic as
// fit_linear and returns identical weights.
LinearModel fit_ridge(const Population& pop, double lambda);

// Greedy CART regression tree minimizing weighted child squared error.
// Thresholds are midpoints between consecutive distinct values; ties go to
// the lowest design column, then the lowest threshold.
TreeModel fit_tree(const Population& pop, int max_depth = 5);

struct MlpOptions {
  std::size_t hidden = 100;
  double l2 = 10.0;
  std::size_t epochs = 500;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

// Full-batch Adam on 0.5 * MSE + l2 / (2n) * |W|^2.
MlpModel fit_mlp(const Population& pop, const MlpOptions& options = {});

// Mean of b(y_i, y_hat_i) over `majority` minus the same over `minority`.
double benefit_gap(const Predictor& h, const Population& pop, Benefit b,
                   std::size_t minority);

struct ConstrainedFit {
  LinearModel model;
  double objective = 0.0;      // at the returned weights
  double ols_objective = 0.0;  // at the OLS warm start
  double gap = 0.0;
  double ols_gap = 0.0;
  // "unconstrained" (OLS already satisfies the constraint), "penalized"
  // (penalty active, gap stays positive) or "boundary" (gap driven to 0).
  std::string regime;
};

// Minimizes MSE + tau * max(0, benefit_gap) over linear models. The
// objective is convex and piecewise quadratic, so the minimizer is found
// exactly among its three regimes starting from the OLS solution; tau = 0
// returns the OLS weights unchanged. Requires exactly two groups.
ConstrainedFit fit_constrained_linear(const Population& pop, double tau, Benefit b,
                                      std::size_t minority);

struct FitReport {
  std::string model_kind;
  nlohmann::json hyperparameters;
  double mae_overall = 0.0;
  std::vector<double> mae_per_group;  // aligned with schema groups
  std::vector<std::string> group_names;
  std::size_t evaluated_on = 0;

  nlohmann::json to_json() const;
};

FitReport evaluate(const Predictor& h, const Population& pop);

// Training-set mean squared error.
double mean_squared_error(const Predictor& h, const Population& pop);

}  // namespace effortsim

#endif  // EFFORTSIM_PREDICTORS_H_
