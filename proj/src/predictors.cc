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

#include "effortsim/predictors.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "effortsim/errors.h"
#include "effortsim/random.h"

namespace effortsim {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kJitter = 1e-8;

// Design matrix with a leading intercept column.
MatrixXd augmented_design(const DesignEncoder& enc, const Population& pop) {
  const MatrixXd X = enc.encode(pop);
  MatrixXd A(X.rows(), X.cols() + 1);
  A.col(0).setOnes();
  A.rightCols(X.cols()) = X;
  return A;
}

VectorXd labels(const Population& pop) {
  VectorXd y(static_cast<Index>(pop.size()));
  for (std::size_t i = 0; i < pop.size(); ++i) y[static_cast<Index>(i)] = pop[i].y;
  return y;
}

struct NormalSystem {
  MatrixXd gram;  // A^T A + penalty (+ jitter)
  VectorXd coef;  // intercept first
  bool jittered = false;
};

NormalSystem solve_normal(const MatrixXd& A, const VectorXd& y, double lambda) {
  NormalSystem sys;
  sys.gram = A.transpose() * A;
  for (Index c = 1; c < sys.gram.cols(); ++c) sys.gram(c, c) += lambda;
  const VectorXd rhs = A.transpose() * y;
  Eigen::ColPivHouseholderQR<MatrixXd> qr(sys.gram);
  if (qr.rank() < sys.gram.cols()) {
    sys.gram.diagonal().array() += kJitter;
    sys.jittered = true;
    qr.compute(sys.gram);
  }
  sys.coef = qr.solve(rhs);
  return sys;
}

LinearModel linear_from(const DesignEncoder& enc, const VectorXd& coef, std::string kind,
                        nlohmann::json hyper) {
  return LinearModel(enc, coef.tail(coef.size() - 1), coef[0], std::move(kind),
                     std::move(hyper));
}

double mse_of(const MatrixXd& A, const VectorXd& y, const VectorXd& coef) {
  return (A * coef - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

LinearModel fit_ridge(const Population& pop, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("ridge lambda must be finite and >= 0");
  }
  if (pop.size() == 0) throw DataError("cannot fit a model on an empty population");
  DesignEncoder enc(pop.schema());
  const MatrixXd A = augmented_design(enc, pop);
  const auto sys = solve_normal(A, labels(pop), lambda);
  nlohmann::json hyper = {{"lambda", lambda}, {"jitter", sys.jittered}};
  return linear_from(enc, sys.coef, lambda == 0.0 ? "linear" : "ridge", std::move(hyper));
}

LinearModel fit_linear(const Population& pop) { return fit_ridge(pop, 0.0); }

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const MatrixXd& X, const VectorXd& y, int max_depth)
      : X_(X), y_(y), max_depth_(max_depth) {}

  std::vector<TreeModel::Node> build() {
    std::vector<std::size_t> all(static_cast<std::size_t>(y_.size()));
    std::iota(all.begin(), all.end(), 0);
    grow(all, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int column = -1;
    double threshold = 0.0;
    double sse = 0.0;
  };

  int grow(const std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double mean = 0.0;
    for (auto i : idx) mean += y_[static_cast<Index>(i)];
    mean /= static_cast<double>(idx.size());
    double sse = 0.0;
    for (auto i : idx) {
      const double d = y_[static_cast<Index>(i)] - mean;
      sse += d * d;
    }
    nodes_[static_cast<std::size_t>(id)].value = mean;
    nodes_[static_cast<std::size_t>(id)].samples = idx.size();
    if (depth >= max_depth_ || idx.size() < 2 || sse <= 0.0) return id;
    const Split best = best_split(idx);
    // Require a real improvement; prefix-sum SSE carries rounding noise.
    if (best.column < 0 || !(best.sse < sse - 1e-12 * (1.0 + sse))) return id;
    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (X_(static_cast<Index>(i), best.column) <= best.threshold ? left : right).push_back(i);
    }
    nodes_[static_cast<std::size_t>(id)].column = best.column;
    nodes_[static_cast<std::size_t>(id)].threshold = best.threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& idx) const {
    Split best;
    bool found = false;
    std::vector<std::size_t> order(idx);
    const double n = static_cast<double>(idx.size());
    for (Index c = 0; c < X_.cols(); ++c) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return X_(static_cast<Index>(a), c) < X_(static_cast<Index>(b), c);
      });
      double total = 0.0, total_sq = 0.0;
      for (auto i : order) {
        const double v = y_[static_cast<Index>(i)];
        total += v;
        total_sq += v * v;
      }
      double left = 0.0, left_sq = 0.0;
      for (std::size_t p = 0; p + 1 < order.size(); ++p) {
        const double v = y_[static_cast<Index>(order[p])];
        left += v;
        left_sq += v * v;
        const double a = X_(static_cast<Index>(order[p]), c);
        const double b = X_(static_cast<Index>(order[p + 1]), c);
        if (a == b) continue;
        const double nl = static_cast<double>(p + 1);
        const double nr = n - nl;
        const double right = total - left;
        const double right_sq = total_sq - left_sq;
        const double sse = (left_sq - left * left / nl) + (right_sq - right * right / nr);
        if (!found || sse < best.sse) {
          found = true;
          best = {static_cast<int>(c), 0.5 * (a + b), sse};
        }
      }
    }
    return best;
  }

  const MatrixXd& X_;
  const VectorXd& y_;
  int max_depth_;
  std::vector<TreeModel::Node> nodes_;
};

}  // namespace

TreeModel fit_tree(const Population& pop, int max_depth) {
  if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
  if (pop.size() == 0) throw DataError("cannot fit a model on an empty population");
  DesignEncoder enc(pop.schema());
  const MatrixXd X = enc.encode(pop);
  const VectorXd y = labels(pop);
  TreeBuilder builder(X, y, max_depth);
  return TreeModel(enc, builder.build(), max_depth);
}

MlpModel fit_mlp(const Population& pop, const MlpOptions& options) {
  if (pop.size() == 0) throw DataError("cannot fit a model on an empty population");
  DesignEncoder enc(pop.schema());
  const MatrixXd X = enc.encode(pop);
  const VectorXd y = labels(pop);
  const Index n = X.rows(), d = X.cols();
  const auto h = static_cast<Index>(options.hidden);
  VectorXd mean = X.colwise().mean().transpose();
  VectorXd scale(d);
  for (Index c = 0; c < d; ++c) {
    const double sd = std::sqrt((X.col(c).array() - mean[c]).square().mean());
    scale[c] = sd > 0.0 ? sd : 1.0;
  }
  MatrixXd Z = (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();

  Rng rng = Rng::substream(options.seed, "mlp");
  const double limit1 = std::sqrt(6.0 / static_cast<double>(d + h));
  const double limit2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  MatrixXd w1(h, d);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < d; ++c) w1(r, c) = (2.0 * rng.uniform() - 1.0) * limit1;
  VectorXd b1 = VectorXd::Zero(h);
  VectorXd w2(h);
  for (Index r = 0; r < h; ++r) w2[r] = (2.0 * rng.uniform() - 1.0) * limit2;
  double b2 = y.mean();

  // Adam state.
  MatrixXd m_w1 = MatrixXd::Zero(h, d), v_w1 = MatrixXd::Zero(h, d);
  VectorXd m_b1 = VectorXd::Zero(h), v_b1 = VectorXd::Zero(h);
  VectorXd m_w2 = VectorXd::Zero(h), v_w2 = VectorXd::Zero(h);
  double m_b2 = 0.0, v_b2 = 0.0;
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8, lr = options.learning_rate;
  const double nn = static_cast<double>(n);
  for (std::size_t t = 1; t <= options.epochs; ++t) {
    const MatrixXd pre = (Z * w1.transpose()).rowwise() + b1.transpose();
    const MatrixXd act = pre.cwiseMax(0.0);
    const VectorXd out = (act * w2).array() + b2;
    const VectorXd err = (out - y) / nn;  // d(0.5 * MSE)/d out
    const VectorXd g_w2 = act.transpose() * err + options.l2 / nn * w2;
    const double g_b2 = err.sum();
    const MatrixXd delta =
        (err * w2.transpose()).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    const MatrixXd g_w1 = delta.transpose() * Z + options.l2 / nn * w1;
    const VectorXd g_b1 = delta.colwise().sum().transpose();
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    auto step = [&](auto& param, auto& m, auto& v, const auto& g) {
      m = beta1 * m + (1.0 - beta1) * g;
      v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
      param -= (lr * (m / c1).array() / ((v / c2).array().sqrt() + eps)).matrix();
    };
    step(w1, m_w1, v_w1, g_w1);
    step(b1, m_b1, v_b1, g_b1);
    step(w2, m_w2, v_w2, g_w2);
    m_b2 = beta1 * m_b2 + (1.0 - beta1) * g_b2;
    v_b2 = beta2 * v_b2 + (1.0 - beta2) * g_b2 * g_b2;
    b2 -= lr * (m_b2 / c1) / (std::sqrt(v_b2 / c2) + eps);
  }
  nlohmann::json hyper = {{"hidden", options.hidden},
                          {"l2", options.l2},
                          {"epochs", options.epochs},
                          {"learning_rate", options.learning_rate},
                          {"seed", options.seed}};
  return MlpModel(enc, mean, scale, w1, b1, w2, b2, std::move(hyper));
}

double benefit_gap(const Predictor& h, const Population& pop, Benefit b,
                   std::size_t minority) {
  if (pop.group_count() != 2) throw ConfigError("benefit gap needs exactly two groups");
  const std::size_t majority = 1 - minority;
  const auto pred = h.predict_all(pop);
  double sum[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < pop.size(); ++i) {
    sum[pop[i].group] += benefit_value(b, pop[i].y, pred[i]);
  }
  return sum[majority] / static_cast<double>(pop.group_size(majority)) -
         sum[minority] / static_cast<double>(pop.group_size(minority));
}

ConstrainedFit fit_constrained_linear(const Population& pop, double tau, Benefit b,
                                      std::size_t minority) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be finite and >= 0");
  if (pop.group_count() != 2) {
    throw ConfigError("constrained fit needs exactly two groups");
  }
  if (minority > 1) throw ConfigError("minority group index out of range");
  const std::size_t majority = 1 - minority;
  DesignEncoder enc(pop.schema());
  const MatrixXd A = augmented_design(enc, pop);
  const VectorXd y = labels(pop);
  const auto sys = solve_normal(A, y, 0.0);
  const double n = static_cast<double>(pop.size());

  // The gap is affine in the coefficients: gap(w) = a . w + c.
  VectorXd row_mean[2] = {VectorXd::Zero(A.cols()), VectorXd::Zero(A.cols())};
  double label_mean[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < pop.size(); ++i) {
    row_mean[pop[i].group] += A.row(static_cast<Index>(i)).transpose();
    label_mean[pop[i].group] += pop[i].y;
  }
  for (std::size_t g = 0; g < 2; ++g) {
    row_mean[g] /= static_cast<double>(pop.group_size(g));
    label_mean[g] /= static_cast<double>(pop.group_size(g));
  }
  const VectorXd a = row_mean[majority] - row_mean[minority];
  const double c = b == Benefit::kPredictedLabel ? 0.0 : -(label_mean[majority] - label_mean[minority]);
  auto gap_of = [&](const VectorXd& w) { return a.dot(w) + c; };
  auto objective_of = [&](const VectorXd& w) {
    return mse_of(A, y, w) + tau * std::max(0.0, gap_of(w));
  };

  const VectorXd& w0 = sys.coef;
  VectorXd w = w0;
  std::string regime = "unconstrained";
  const double g0 = gap_of(w0);
  if (tau > 0.0 && g0 > 0.0) {
    // Hessian of the MSE is 2 * gram / n; the penalty shifts the minimizer
    // along gram^{-1} a.
    const VectorXd dir = sys.gram.colPivHouseholderQr().solve(a) * n;  // H^{-1} a, H = gram / n
    const double curvature = a.dot(dir);
    if (curvature > 0.0) {
      const VectorXd penalized = w0 - 0.5 * tau * dir;
      if (gap_of(penalized) >= 0.0) {
        w = penalized;
        regime = "penalized";
      } else {
        w = w0 - (g0 / curvature) * dir;
        regime = "boundary";
      }
    }
  }
  nlohmann::json hyper = {{"tau", tau},
                          {"benefit", benefit_name(b)},
                          {"minority", pop.group_name(minority)},
                          {"constraint", "hinge-penalty variant"},
                          {"regime", regime},
                          {"jitter", sys.jittered}};
  ConstrainedFit fit{linear_from(enc, w, tau == 0.0 ? "linear" : "constrained", hyper),
                     objective_of(w), objective_of(w0), gap_of(w), g0, regime};
  return fit;
}

double mean_squared_error(const Predictor& h, const Population& pop) {
  const auto pred = h.predict_all(pop);
  double sum = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double d = pred[i] - pop[i].y;
    sum += d * d;
  }
  return sum / static_cast<double>(pop.size());
}

nlohmann::json FitReport::to_json() const {
  nlohmann::json per_group = nlohmann::json::object();
  for (std::size_t g = 0; g < group_names.size(); ++g) per_group[group_names[g]] = mae_per_group[g];
  return {{"model", model_kind},
          {"hyperparameters", hyperparameters},
          {"mae_overall", mae_overall},
          {"mae_per_group", per_group},
          {"evaluated_on", evaluated_on}};
}

FitReport evaluate(const Predictor& h, const Population& pop) {
  const auto pred = h.predict_all(pop);
  FitReport report;
  report.model_kind = h.kind();
  const auto j = h.to_json();
  report.hyperparameters = j.value("hyperparameters", nlohmann::json::object());
  report.group_names = pop.schema().groups();
  report.evaluated_on = pop.size();
  std::vector<double> sum(pop.group_count(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double e = std::abs(pred[i] - pop[i].y);
    total += e;
    sum[pop[i].group] += e;
  }
  report.mae_overall = total / static_cast<double>(pop.size());
  for (std::size_t g = 0; g < pop.group_count(); ++g) {
    report.mae_per_group.push_back(sum[g] / static_cast<double>(pop.group_size(g)));
  }
  return report;
}

}  // namespace effortsim
