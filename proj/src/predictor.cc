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

#include "effortsim/predictor.h"

#include "effortsim/errors.h"

namespace effortsim {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

DesignEncoder::DesignEncoder(const FeatureSchema& schema) : names_(schema.feature_names()) {
  for (const auto& f : schema.features()) {
    const std::size_t L = f.kind.levels.size();
    level_counts_.push_back(L);
    width_ += L == 0 ? 1 : L - 1;
  }
}

void DesignEncoder::encode(std::span<const double> x, std::span<double> out) const {
  std::size_t c = 0;
  for (std::size_t k = 0; k < level_counts_.size(); ++k) {
    const std::size_t L = level_counts_[k];
    if (L == 0) {
      out[c++] = x[k];
      continue;
    }
    const auto level = static_cast<std::size_t>(x[k]);
    for (std::size_t l = 1; l < L; ++l) out[c++] = level == l ? 1.0 : 0.0;
  }
}

Eigen::VectorXd DesignEncoder::encode(std::span<const double> x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(width_));
  encode(x, std::span<double>(out.data(), width_));
  return out;
}

Eigen::MatrixXd DesignEncoder::encode(const Population& pop) const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pop.size()), static_cast<Eigen::Index>(width_));
  Eigen::VectorXd row(static_cast<Eigen::Index>(width_));
  for (std::size_t i = 0; i < pop.size(); ++i) {
    encode(pop[i].x, std::span<double>(row.data(), width_));
    X.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return X;
}

nlohmann::json DesignEncoder::to_json() const {
  return {{"features", names_}, {"level_counts", level_counts_}};
}

DesignEncoder DesignEncoder::from_json(const nlohmann::json& j) {
  DesignEncoder e;
  e.names_ = j.at("features").get<std::vector<std::string>>();
  e.level_counts_ = j.at("level_counts").get<std::vector<std::size_t>>();
  if (e.names_.size() != e.level_counts_.size()) {
    throw ConfigError("encoder: features and level_counts differ in length");
  }
  for (auto L : e.level_counts_) e.width_ += L == 0 ? 1 : L - 1;
  return e;
}

void Predictor::check_schema(const FeatureSchema& schema) const {
  if (schema.feature_names() != feature_names()) {
    throw ConfigError(kind() + " model was fit on a different feature list");
  }
}

std::vector<double> Predictor::predict_all(const Population& pop) const {
  check_schema(pop.schema());
  std::vector<double> out;
  out.reserve(pop.size());
  for (const auto& ind : pop.individuals()) out.push_back(predict(ind.x));
  return out;
}

nlohmann::json ConstantModel::to_json() const {
  return {{"model", "constant"}, {"features", names_}, {"value", value_}};
}

LinearModel::LinearModel(DesignEncoder encoder, Eigen::VectorXd weights, double intercept,
                         std::string kind, nlohmann::json hyperparameters)
    : encoder_(std::move(encoder)),
      weights_(std::move(weights)),
      intercept_(intercept),
      kind_(std::move(kind)),
      hyper_(std::move(hyperparameters)) {
  if (static_cast<std::size_t>(weights_.size()) != encoder_.width()) {
    throw ConfigError("linear model: weight count does not match the encoder");
  }
}

double LinearModel::predict(std::span<const double> x) const {
  // Accumulate in column order so predictions are reproducible bit for bit.
  double sum = intercept_;
  thread_local std::vector<double> row;
  row.resize(encoder_.width());
  encoder_.encode(x, row);
  for (std::size_t c = 0; c < row.size(); ++c) {
    sum += weights_[static_cast<Eigen::Index>(c)] * row[c];
  }
  return sum;
}

nlohmann::json LinearModel::to_json() const {
  return {{"model", kind_},
          {"encoder", encoder_.to_json()},
          {"weights", to_std(weights_)},
          {"intercept", intercept_},
          {"hyperparameters", hyper_}};
}

TreeModel::TreeModel(DesignEncoder encoder, std::vector<Node> nodes, int max_depth)
    : encoder_(std::move(encoder)), nodes_(std::move(nodes)), max_depth_(max_depth) {
  if (nodes_.empty()) throw ConfigError("tree model has no nodes");
}

double TreeModel::predict(std::span<const double> x) const {
  thread_local std::vector<double> row;
  row.resize(encoder_.width());
  encoder_.encode(x, row);
  int n = 0;
  while (nodes_[static_cast<std::size_t>(n)].column >= 0) {
    const auto& node = nodes_[static_cast<std::size_t>(n)];
    n = row[static_cast<std::size_t>(node.column)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(n)].value;
}

int TreeModel::depth() const {
  std::vector<int> depth(nodes_.size(), 0);
  int best = 0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    best = std::max(best, depth[n]);
    if (nodes_[n].column >= 0) {
      depth[static_cast<std::size_t>(nodes_[n].left)] = depth[n] + 1;
      depth[static_cast<std::size_t>(nodes_[n].right)] = depth[n] + 1;
    }
  }
  return best;
}

nlohmann::json TreeModel::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({{"column", n.column},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"value", n.value},
                     {"samples", n.samples}});
  }
  return {{"model", "tree"},
          {"encoder", encoder_.to_json()},
          {"nodes", nodes},
          {"hyperparameters", {{"max_depth", max_depth_}}}};
}

MlpModel::MlpModel(DesignEncoder encoder, Eigen::VectorXd mean, Eigen::VectorXd scale,
                   Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::VectorXd w2, double b2,
                   nlohmann::json hyperparameters)
    : encoder_(std::move(encoder)),
      mean_(std::move(mean)),
      scale_(std::move(scale)),
      w1_(std::move(w1)),
      b1_(std::move(b1)),
      w2_(std::move(w2)),
      b2_(b2),
      hyper_(std::move(hyperparameters)) {}

double MlpModel::predict(std::span<const double> x) const {
  const Eigen::VectorXd z =
      (encoder_.encode(x) - mean_).cwiseQuotient(scale_);
  const Eigen::VectorXd h = (w1_ * z + b1_).cwiseMax(0.0);
  return w2_.dot(h) + b2_;
}

nlohmann::json MlpModel::to_json() const {
  nlohmann::json w1 = nlohmann::json::array();
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    w1.push_back(to_std(w1_.row(r).transpose()));
  }
  return {{"model", "mlp"},
          {"encoder", encoder_.to_json()},
          {"mean", to_std(mean_)},
          {"scale", to_std(scale_)},
          {"w1", w1},
          {"b1", to_std(b1_)},
          {"w2", to_std(w2_)},
          {"b2", b2_},
          {"hyperparameters", hyper_}};
}

std::shared_ptr<const Predictor> predictor_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("model").get<std::string>();
    if (kind == "constant") {
      return std::make_shared<ConstantModel>(j.at("features").get<std::vector<std::string>>(),
                                             j.at("value").get<double>());
    }
    auto encoder = DesignEncoder::from_json(j.at("encoder"));
    if (kind == "linear" || kind == "ridge" || kind == "constrained") {
      return std::make_shared<LinearModel>(
          std::move(encoder), to_eigen(j.at("weights").get<std::vector<double>>()),
          j.at("intercept").get<double>(), kind, j.value("hyperparameters", nlohmann::json::object()));
    }
    if (kind == "tree") {
      std::vector<TreeModel::Node> nodes;
      for (const auto& n : j.at("nodes")) {
        nodes.push_back({.column = n.at("column").get<int>(),
                         .threshold = n.at("threshold").get<double>(),
                         .left = n.at("left").get<int>(),
                         .right = n.at("right").get<int>(),
                         .value = n.at("value").get<double>(),
                         .samples = n.at("samples").get<std::size_t>()});
      }
      return std::make_shared<TreeModel>(std::move(encoder), std::move(nodes),
                                         j.at("hyperparameters").at("max_depth").get<int>());
    }
    if (kind == "mlp") {
      const auto rows = j.at("w1").get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd w1(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(encoder.width()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        w1.row(static_cast<Eigen::Index>(r)) = to_eigen(rows[r]).transpose();
      }
      return std::make_shared<MlpModel>(
          std::move(encoder), to_eigen(j.at("mean").get<std::vector<double>>()),
          to_eigen(j.at("scale").get<std::vector<double>>()), std::move(w1),
          to_eigen(j.at("b1").get<std::vector<double>>()),
          to_eigen(j.at("w2").get<std::vector<double>>()), j.at("b2").get<double>(),
          j.value("hyperparameters", nlohmann::json::object()));
    }
    throw ConfigError("unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model JSON: ") + e.what());
  }
}

}  // namespace effortsim
