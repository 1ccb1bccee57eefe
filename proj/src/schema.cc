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

#include "effortsim/schema.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "effortsim/csv.h"
#include "effortsim/errors.h"

namespace effortsim {

FeatureKind FeatureKind::numerical_monotone(Direction d) {
  FeatureKind k;
  k.tag = KindTag::kNumericalMonotone;
  k.direction = d;
  return k;
}
FeatureKind FeatureKind::numerical_non_monotone() {
  FeatureKind k;
  k.tag = KindTag::kNumericalNonMonotone;
  return k;
}
FeatureKind FeatureKind::ordinal_monotone(Direction d) {
  FeatureKind k;
  k.tag = KindTag::kOrdinalMonotone;
  k.direction = d;
  return k;
}
FeatureKind FeatureKind::ordinal_non_monotone() {
  FeatureKind k;
  k.tag = KindTag::kOrdinalNonMonotone;
  return k;
}
FeatureKind FeatureKind::categorical(std::vector<std::string> levels) {
  FeatureKind k;
  k.tag = KindTag::kCategorical;
  k.levels = std::move(levels);
  return k;
}
FeatureKind FeatureKind::immutable(std::vector<std::string> levels) {
  FeatureKind k;
  k.tag = KindTag::kImmutable;
  k.levels = std::move(levels);
  return k;
}
FeatureKind FeatureKind::conditionally_immutable(Direction allowed) {
  FeatureKind k;
  k.tag = KindTag::kConditionallyImmutable;
  k.direction = allowed;
  return k;
}

std::string_view kind_name(KindTag tag) {
  switch (tag) {
    case KindTag::kNumericalMonotone:
      return "numerical_monotone";
    case KindTag::kNumericalNonMonotone:
      return "numerical_non_monotone";
    case KindTag::kOrdinalMonotone:
      return "ordinal_monotone";
    case KindTag::kOrdinalNonMonotone:
      return "ordinal_non_monotone";
    case KindTag::kCategorical:
      return "categorical";
    case KindTag::kImmutable:
      return "immutable";
    case KindTag::kConditionallyImmutable:
      return "conditionally_immutable";
  }
  return "unknown";
}

double FeatureSpec::weight_for(std::string_view group) const {
  auto it = group_weights.find(std::string(group));
  return it == group_weights.end() ? weight : it->second;
}

namespace {

bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

std::string_view direction_name(Direction d) {
  return d == Direction::kIncreasing ? "increasing" : "decreasing";
}

Direction parse_direction(const nlohmann::json& f, const std::string& name) {
  if (!f.contains("direction")) {
    throw ConfigError("feature '" + name + "' needs a direction");
  }
  const auto d = f.at("direction").get<std::string>();
  if (d == "increasing") return Direction::kIncreasing;
  if (d == "decreasing") return Direction::kDecreasing;
  throw ConfigError("feature '" + name + "': unknown direction '" + d + "'");
}

FeatureKind parse_kind(const nlohmann::json& f, const std::string& name) {
  const auto kind = f.at("kind").get<std::string>();
  std::vector<std::string> levels;
  if (f.contains("levels")) levels = f.at("levels").get<std::vector<std::string>>();
  FeatureKind out;
  if (kind == "numerical_monotone") {
    out = FeatureKind::numerical_monotone(parse_direction(f, name));
  } else if (kind == "numerical" || kind == "numerical_non_monotone") {
    out = FeatureKind::numerical_non_monotone();
  } else if (kind == "ordinal_monotone") {
    out = FeatureKind::ordinal_monotone(parse_direction(f, name));
  } else if (kind == "ordinal" || kind == "ordinal_non_monotone") {
    out = FeatureKind::ordinal_non_monotone();
  } else if (kind == "categorical" || kind == "binary") {
    out = FeatureKind::categorical(levels);
    if (kind == "binary" && levels.size() != 2) {
      throw ConfigError("binary feature '" + name + "' needs exactly 2 levels");
    }
  } else if (kind == "immutable") {
    out = FeatureKind::immutable(levels);
  } else if (kind == "conditionally_immutable") {
    out = FeatureKind::conditionally_immutable(parse_direction(f, name));
    out.levels = levels;
  } else {
    throw ConfigError("feature '" + name + "': unknown kind '" + kind + "'");
  }
  if (!out.has_levels() && !levels.empty()) {
    throw ConfigError("feature '" + name + "': levels given for kind " + kind);
  }
  if (f.contains("range")) {
    if (!out.is_ordinal()) {
      throw ConfigError("feature '" + name + "': range only applies to ordinals");
    }
    const auto r = f.at("range").get<std::vector<double>>();
    if (r.size() != 2 || !(r[0] <= r[1])) {
      throw ConfigError("feature '" + name + "': range must be [lo, hi]");
    }
    out.range = std::make_pair(r[0], r[1]);
  }
  return out;
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features,
                             std::string sensitive, std::string label,
                             char delimiter)
    : features_(std::move(features)), label_(std::move(label)), delimiter_(delimiter) {
  if (features_.empty()) throw ConfigError("schema has no features");
  std::set<std::string> names;
  for (auto& f : features_) {
    if (f.name.empty()) throw ConfigError("feature with empty name");
    if (!names.insert(f.name).second) {
      throw ConfigError("duplicate feature '" + f.name + "'");
    }
    f.is_mutable = !f.kind.is_immutable();
    if (f.kind.tag == KindTag::kCategorical && f.kind.levels.size() < 2) {
      throw ConfigError("categorical feature '" + f.name + "' needs >= 2 levels");
    }
    std::set<std::string> lv(f.kind.levels.begin(), f.kind.levels.end());
    if (lv.size() != f.kind.levels.size()) {
      throw ConfigError("feature '" + f.name + "' has repeated levels");
    }
    if (!finite_nonnegative(f.weight)) {
      throw ConfigError("feature '" + f.name + "' has an invalid weight");
    }
    for (const auto& [g, w] : f.group_weights) {
      if (!finite_nonnegative(w)) {
        throw ConfigError("feature '" + f.name + "' has an invalid weight for " + g);
      }
    }
    if (f.categorical_cost && !finite_nonnegative(*f.categorical_cost)) {
      throw ConfigError("feature '" + f.name + "' has an invalid categorical_cost");
    }
  }
  if (label_.empty()) throw ConfigError("schema needs a label column");
  if (names.count(label_)) {
    throw ConfigError("label '" + label_ + "' is also declared as a feature");
  }
  auto s = index_of(sensitive);
  if (!s) throw ConfigError("sensitive feature '" + sensitive + "' is not declared");
  sensitive_ = *s;
  const auto& kind = features_[sensitive_].kind;
  if (kind.tag != KindTag::kImmutable || !kind.has_levels()) {
    throw ConfigError("sensitive feature '" + sensitive +
                      "' must be immutable with declared levels");
  }
}

FeatureSchema FeatureSchema::from_json(const nlohmann::json& j) {
  try {
    std::vector<FeatureSpec> features;
    for (const auto& f : j.at("features")) {
      FeatureSpec spec;
      spec.name = f.at("name").get<std::string>();
      spec.kind = parse_kind(f, spec.name);
      spec.is_mutable = !spec.kind.is_immutable();
      if (f.contains("mutable") && f.at("mutable").get<bool>() != spec.is_mutable) {
        throw ConfigError("feature '" + spec.name + "': mutable flag contradicts kind " +
                          std::string(kind_name(spec.kind.tag)));
      }
      if (f.contains("weight")) {
        const auto& w = f.at("weight");
        if (w.is_object()) {
          spec.group_weights = w.get<std::map<std::string, double>>();
        } else {
          spec.weight = w.get<double>();
        }
      }
      if (f.contains("categorical_cost")) {
        spec.categorical_cost = f.at("categorical_cost").get<double>();
      }
      features.push_back(std::move(spec));
    }
    char delimiter = ',';
    if (j.contains("delimiter")) {
      const auto d = j.at("delimiter").get<std::string>();
      if (d.size() != 1) throw ConfigError("delimiter must be one character");
      delimiter = d[0];
    }
    return FeatureSchema(std::move(features), j.at("sensitive").get<std::string>(),
                         j.at("label").get<std::string>(), delimiter);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
}

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("schema " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json FeatureSchema::to_json() const {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : features_) {
    nlohmann::json o;
    o["name"] = f.name;
    o["kind"] = kind_name(f.kind.tag);
    if (f.kind.is_monotone() || f.kind.tag == KindTag::kConditionallyImmutable) {
      o["direction"] = direction_name(f.kind.direction);
    }
    if (f.kind.has_levels()) o["levels"] = f.kind.levels;
    if (f.kind.range) o["range"] = {f.kind.range->first, f.kind.range->second};
    o["mutable"] = f.is_mutable;
    if (!f.group_weights.empty()) {
      o["weight"] = f.group_weights;
    } else if (f.weight != 1.0) {
      o["weight"] = f.weight;
    }
    if (f.categorical_cost) o["categorical_cost"] = *f.categorical_cost;
    features.push_back(std::move(o));
  }
  nlohmann::json j{{"features", features},
                   {"sensitive", sensitive_name()},
                   {"label", label_}};
  if (delimiter_ != ',') j["delimiter"] = std::string(1, delimiter_);
  return j;
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < features_.size(); ++k) {
    if (features_[k].name == name) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> FeatureSchema::group_index(std::string_view name) const {
  const auto& g = groups();
  auto it = std::find(g.begin(), g.end(), name);
  if (it == g.end()) return std::nullopt;
  return static_cast<std::size_t>(it - g.begin());
}

std::vector<std::size_t> FeatureSchema::mutable_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < features_.size(); ++k) {
    if (features_[k].is_mutable) out.push_back(k);
  }
  return out;
}

std::size_t FeatureSchema::binary_count() const {
  return static_cast<std::size_t>(
      std::count_if(features_.begin(), features_.end(),
                    [](const FeatureSpec& f) { return f.kind.levels.size() == 2; }));
}

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

double FeatureSchema::parse_value(std::size_t k, std::string_view cell) const {
  const auto& f = features_.at(k);
  double v;
  if (f.kind.has_levels()) {
    auto it = std::find(f.kind.levels.begin(), f.kind.levels.end(), cell);
    if (it == f.kind.levels.end()) {
      throw DataError("value '" + std::string(cell) + "' is not a declared level of '" +
                      f.name + "'");
    }
    v = static_cast<double>(it - f.kind.levels.begin());
  } else {
    v = csv::parse_double(cell, "column '" + f.name + "'");
  }
  if (!admits(k, v)) {
    throw DataError("value '" + std::string(cell) + "' is out of range for '" +
                    f.name + "'");
  }
  return v;
}

std::string FeatureSchema::format_value(std::size_t k, double value) const {
  const auto& f = features_.at(k);
  if (f.kind.has_levels()) return f.kind.levels.at(static_cast<std::size_t>(value));
  return csv::format_double(value);
}

bool FeatureSchema::admits(std::size_t k, double value) const {
  const auto& f = features_.at(k);
  if (!std::isfinite(value)) return false;
  if (f.kind.has_levels()) {
    return value >= 0 && value == std::floor(value) &&
           value < static_cast<double>(f.kind.levels.size());
  }
  if (f.kind.range) return value >= f.kind.range->first && value <= f.kind.range->second;
  return true;
}

FeatureSchema FeatureSchema::subset(const std::vector<std::size_t>& keep) const {
  std::vector<FeatureSpec> kept;
  for (auto k : keep) kept.push_back(features_.at(k));
  return FeatureSchema(std::move(kept), sensitive_name(), label_, delimiter_);
}

}  // namespace effortsim
