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

#ifndef EFFORTSIM_PREDICTOR_H_
#define EFFORTSIM_PREDICTOR_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "effortsim/dataset.h"
#include "effortsim/schema.h"
#include "json.hpp"

namespace effortsim {

// Maps a stored feature vector to model inputs. Numeric features pass
// through; a levelled feature with L levels becomes L-1 indicator columns
// (the first level is the baseline), so binary features stay a single 0/1
// column.
class DesignEncoder {
 public:
  DesignEncoder() = default;
  explicit DesignEncoder(const FeatureSchema& schema);

  std::size_t input_size() const { return level_counts_.size(); }
  std::size_t width() const { return width_; }
  const std::vector<std::string>& feature_names() const { return names_; }

  void encode(std::span<const double> x, std::span<double> out) const;
  Eigen::VectorXd encode(std::span<const double> x) const;
  // Rows of the population, one design row each.
  Eigen::MatrixXd encode(const Population& pop) const;

  nlohmann::json to_json() const;
  static DesignEncoder from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> level_counts_;  // 0 for numeric
  std::size_t width_ = 0;
};

// A fitted regression model h: x -> y_hat. Implementations are immutable and
// safe to query concurrently.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual double predict(std::span<const double> x) const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::json to_json() const = 0;

  // Feature names (in order) the model was fit on.
  virtual const std::vector<std::string>& feature_names() const = 0;

  // Predictions for every individual; throws ConfigError when the
  // population's features differ from the fit-time list.
  std::vector<double> predict_all(const Population& pop) const;
  void check_schema(const FeatureSchema& schema) const;
};

class ConstantModel final : public Predictor {
 public:
  ConstantModel(std::vector<std::string> names, double value)
      : names_(std::move(names)), value_(value) {}

  double predict(std::span<const double>) const override { return value_; }
  std::string kind() const override { return "constant"; }
  nlohmann::json to_json() const override;
  const std::vector<std::string>& feature_names() const override { return names_; }
  double value() const { return value_; }

 private:
  std::vector<std::string> names_;
  double value_;
};

// Linear, ridge and constrained-linear fits share this representation.
class LinearModel final : public Predictor {
 public:
  LinearModel(DesignEncoder encoder, Eigen::VectorXd weights, double intercept,
              std::string kind, nlohmann::json hyperparameters = nlohmann::json::object());

  double predict(std::span<const double> x) const override;
  std::string kind() const override { return kind_; }
  nlohmann::json to_json() const override;
  const std::vector<std::string>& feature_names() const override {
    return encoder_.feature_names();
  }

  const DesignEncoder& encoder() const { return encoder_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  const nlohmann::json& hyperparameters() const { return hyper_; }

 private:
  DesignEncoder encoder_;
  Eigen::VectorXd weights_;
  double intercept_;
  std::string kind_;
  nlohmann::json hyper_;
};

// Binary regression tree; leaves hold the mean label of their samples.
class TreeModel final : public Predictor {
 public:
  struct Node {
    int column = -1;  // design column; -1 for a leaf
    double threshold = 0.0;  // go left when value <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;
    std::size_t samples = 0;
  };

  TreeModel(DesignEncoder encoder, std::vector<Node> nodes, int max_depth);

  double predict(std::span<const double> x) const override;
  std::string kind() const override { return "tree"; }
  nlohmann::json to_json() const override;
  const std::vector<std::string>& feature_names() const override {
    return encoder_.feature_names();
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;

 private:
  DesignEncoder encoder_;
  std::vector<Node> nodes_;
  int max_depth_;
};

// One hidden ReLU layer on standardized inputs.
class MlpModel final : public Predictor {
 public:
  MlpModel(DesignEncoder encoder, Eigen::VectorXd mean, Eigen::VectorXd scale,
           Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::VectorXd w2, double b2,
           nlohmann::json hyperparameters);

  double predict(std::span<const double> x) const override;
  std::string kind() const override { return "mlp"; }
  nlohmann::json to_json() const override;
  const std::vector<std::string>& feature_names() const override {
    return encoder_.feature_names();
  }

 private:
  DesignEncoder encoder_;
  Eigen::VectorXd mean_, scale_;
  Eigen::MatrixXd w1_;  // hidden x width
  Eigen::VectorXd b1_, w2_;
  double b2_;
  nlohmann::json hyper_;
};

std::shared_ptr<const Predictor> predictor_from_json(const nlohmann::json& j);

}  // namespace effortsim

#endif  // EFFORTSIM_PREDICTOR_H_
