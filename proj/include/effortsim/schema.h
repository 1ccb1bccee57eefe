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

#ifndef EFFORTSIM_SCHEMA_H_
#define EFFORTSIM_SCHEMA_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace effortsim {

// Direction of change an individual considers desirable.
enum class Direction { kIncreasing, kDecreasing };

enum class KindTag {
  kNumericalMonotone,
  kNumericalNonMonotone,
  kOrdinalMonotone,
  kOrdinalNonMonotone,
  kCategorical,
  kImmutable,
  kConditionallyImmutable,
};

// How a feature may change and what changing it costs.
//
// Categorical features carry their levels. Immutable and conditionally
// immutable features may carry levels too when their raw values are strings
// (e.g. a sensitive attribute coded "F"/"M"). Values of a levelled feature are
// stored as level indices.
struct FeatureKind {
  KindTag tag = KindTag::kNumericalNonMonotone;
  // Monotone kinds: desirable direction. Conditionally immutable: the only
  // direction a change is possible in.
  Direction direction = Direction::kIncreasing;
  std::vector<std::string> levels;
  // Ordinal kinds: optional inclusive value range.
  std::optional<std::pair<double, double>> range;

  static FeatureKind numerical_monotone(Direction d);
  static FeatureKind numerical_non_monotone();
  static FeatureKind ordinal_monotone(Direction d);
  static FeatureKind ordinal_non_monotone();
  static FeatureKind categorical(std::vector<std::string> levels);
  static FeatureKind immutable(std::vector<std::string> levels = {});
  static FeatureKind conditionally_immutable(Direction allowed);

  bool is_immutable() const {
    return tag == KindTag::kImmutable || tag == KindTag::kConditionallyImmutable;
  }
  bool is_monotone() const {
    return tag == KindTag::kNumericalMonotone || tag == KindTag::kOrdinalMonotone;
  }
  bool is_ordinal() const {
    return tag == KindTag::kOrdinalMonotone || tag == KindTag::kOrdinalNonMonotone;
  }
  bool has_levels() const { return !levels.empty(); }

  bool operator==(const FeatureKind&) const = default;
};

std::string_view kind_name(KindTag tag);

struct FeatureSpec {
  std::string name;
  FeatureKind kind;
  // Derived from the kind: false exactly for (conditionally) immutable kinds.
  bool is_mutable = true;
  // c_{s,k}: default weight, optionally overridden per group name.
  double weight = 1.0;
  std::map<std::string, double> group_weights;
  // Cost of switching categorical level; falls back to EffortParams.
  std::optional<double> categorical_cost;

  double weight_for(std::string_view group) const;

  bool operator==(const FeatureSpec&) const = default;
};

// Ordered feature list plus the sensitive attribute and label column.
// Immutable once constructed; the constructor validates every invariant and
// throws ConfigError.
class FeatureSchema {
 public:
  FeatureSchema(std::vector<FeatureSpec> features, std::string sensitive,
                std::string label, char delimiter = ',');

  // JSON layout:
  //   {"features": [{"name", "kind", "direction"?, "levels"?, "range"?,
  //                  "mutable"?, "weight"?, "categorical_cost"?}],
  //    "sensitive": str, "label": str, "delimiter"?: str}
  // `weight` is a number or an object keyed by group name.
  static FeatureSchema from_json(const nlohmann::json& j);
  static FeatureSchema load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<FeatureSpec>& features() const { return features_; }
  const FeatureSpec& feature(std::size_t k) const { return features_.at(k); }
  // K, the number of features.
  std::size_t size() const { return features_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::size_t sensitive_index() const { return sensitive_; }
  const std::string& sensitive_name() const { return features_[sensitive_].name; }
  const std::string& label() const { return label_; }
  char delimiter() const { return delimiter_; }

  // Group names are the sensitive feature's levels; group ids index them.
  const std::vector<std::string>& groups() const {
    return features_[sensitive_].kind.levels;
  }
  std::optional<std::size_t> group_index(std::string_view name) const;

  std::vector<std::size_t> mutable_indices() const;
  // Features stored with exactly two levels.
  std::size_t binary_count() const;
  std::vector<std::string> feature_names() const;

  // Raw cell text -> stored value (level index for levelled features).
  double parse_value(std::size_t k, std::string_view cell) const;
  std::string format_value(std::size_t k, double value) const;
  // True when `value` is admissible for feature k.
  bool admits(std::size_t k, double value) const;

  FeatureSchema subset(const std::vector<std::size_t>& keep) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<FeatureSpec> features_;
  std::size_t sensitive_ = 0;
  std::string label_;
  char delimiter_ = ',';
};

}  // namespace effortsim

#endif  // EFFORTSIM_SCHEMA_H_
