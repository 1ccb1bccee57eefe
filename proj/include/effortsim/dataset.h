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

#ifndef EFFORTSIM_DATASET_H_
#define EFFORTSIM_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "effortsim/schema.h"
#include "json.hpp"

namespace effortsim {

struct Individual {
  std::vector<double> x;  // length K; levelled features hold level indices
  double y = 0.0;
  std::size_t group = 0;  // index into FeatureSchema::groups()
  std::size_t row_id = 0;  // position in the originating file

  bool operator==(const Individual&) const = default;
};

// Individuals plus the group-conditional sorted value tables that define
// every quantile rank. Immutable after construction.
class Population {
 public:
  // Validates rows against the schema (throws DataError) and builds the
  // tables. Every group declared by the schema must be non-empty.
  Population(std::shared_ptr<const FeatureSchema> schema,
             std::vector<Individual> individuals);

  const FeatureSchema& schema() const { return *schema_; }
  const std::shared_ptr<const FeatureSchema>& schema_ptr() const { return schema_; }

  std::size_t size() const { return individuals_.size(); }
  const Individual& operator[](std::size_t i) const { return individuals_[i]; }
  std::span<const Individual> individuals() const { return individuals_; }

  std::size_t group_count() const { return schema_->groups().size(); }
  const std::string& group_name(std::size_t g) const { return schema_->groups()[g]; }
  std::size_t group_size(std::size_t g) const { return label_tables_[g].size(); }
  // Sorted feature-k values of group g.
  std::span<const double> feature_table(std::size_t g, std::size_t k) const {
    return feature_tables_[g][k];
  }
  // Sorted labels of group g.
  std::span<const double> label_table(std::size_t g) const { return label_tables_[g]; }

  // Smallest group (lowest index on ties).
  std::size_t smallest_group() const;

  // Same schema, different rows.
  Population with_individuals(std::vector<Individual> individuals) const {
    return Population(schema_, std::move(individuals));
  }

 private:
  std::shared_ptr<const FeatureSchema> schema_;
  std::vector<Individual> individuals_;
  std::vector<std::vector<std::vector<double>>> feature_tables_;  // [g][k]
  std::vector<std::vector<double>> label_tables_;                 // [g]
};

// Reads a delimited file whose header names every schema feature and the
// label column (extra columns are ignored). Row order is preserved.
Population load_csv(const std::filesystem::path& csv_path,
                    std::shared_ptr<const FeatureSchema> schema);
Population load_csv(const std::filesystem::path& csv_path,
                    const std::filesystem::path& schema_path);

// Writes schema features followed by the label, in the input format.
void write_csv(const Population& pop, std::ostream& out);

// Seeded disjoint partition; round(fraction * n) rows go to the first part.
// Both parts keep the input row order. Throws DataError when a group ends up
// empty in either part.
std::pair<Population, Population> split(const Population& pop,
                                        double train_fraction, std::uint64_t seed);

enum class FeatureFilter { kMutablePlusSensitive, kAll };

Population restrict_features(const Population& pop, FeatureFilter keep);

// Offline fixture: schema + per-group sizes + a group shift.
struct SyntheticSpec {
  std::shared_ptr<const FeatureSchema> schema;
  std::vector<std::size_t> group_sizes;  // aligned with schema groups
  // Group g's features are offset by g * shift standard units.
  double shift = 0.0;
  std::uint64_t seed = 0;

  // Schema JSON plus {"group_sizes": {name: n} | [n...], "shift", "seed"}.
  static SyntheticSpec from_json(const nlohmann::json& j);
};

Population generate_synthetic(const SyntheticSpec& spec);

}  // namespace effortsim

#endif  // EFFORTSIM_DATASET_H_
