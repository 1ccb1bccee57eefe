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

#include "effortsim/dataset.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "effortsim/csv.h"
#include "effortsim/errors.h"
#include "effortsim/random.h"

namespace effortsim {

Population::Population(std::shared_ptr<const FeatureSchema> schema,
                       std::vector<Individual> individuals)
    : schema_(std::move(schema)), individuals_(std::move(individuals)) {
  const std::size_t K = schema_->size();
  const std::size_t G = schema_->groups().size();
  const std::size_t s = schema_->sensitive_index();
  feature_tables_.assign(G, std::vector<std::vector<double>>(K));
  label_tables_.assign(G, {});
  for (std::size_t i = 0; i < individuals_.size(); ++i) {
    const auto& ind = individuals_[i];
    if (ind.x.size() != K) {
      throw DataError("individual " + std::to_string(i) + " has " +
                      std::to_string(ind.x.size()) + " features, schema has " +
                      std::to_string(K));
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (!schema_->admits(k, ind.x[k])) {
        throw DataError("individual " + std::to_string(i) + ": invalid value for '" +
                        schema_->feature(k).name + "'");
      }
    }
    if (!std::isfinite(ind.y)) {
      throw DataError("individual " + std::to_string(i) + " has a non-finite label");
    }
    if (ind.group >= G || static_cast<double>(ind.group) != ind.x[s]) {
      throw DataError("individual " + std::to_string(i) +
                      ": group does not match the sensitive feature");
    }
    for (std::size_t k = 0; k < K; ++k) feature_tables_[ind.group][k].push_back(ind.x[k]);
    label_tables_[ind.group].push_back(ind.y);
  }
  for (std::size_t g = 0; g < G; ++g) {
    if (label_tables_[g].empty()) {
      throw DataError("group '" + schema_->groups()[g] + "' has no individuals");
    }
    for (auto& table : feature_tables_[g]) std::sort(table.begin(), table.end());
    std::sort(label_tables_[g].begin(), label_tables_[g].end());
  }
}

std::size_t Population::smallest_group() const {
  std::size_t best = 0;
  for (std::size_t g = 1; g < group_count(); ++g) {
    if (group_size(g) < group_size(best)) best = g;
  }
  return best;
}

Population load_csv(const std::filesystem::path& csv_path,
                    std::shared_ptr<const FeatureSchema> schema) {
  const auto table = csv::read_file(csv_path, schema->delimiter());
  const std::size_t K = schema->size();
  std::vector<int> columns(K);
  for (std::size_t k = 0; k < K; ++k) {
    columns[k] = table.column(schema->feature(k).name);
    if (columns[k] < 0) {
      throw DataError(csv_path.string() + ": missing column '" +
                      schema->feature(k).name + "'");
    }
  }
  const int label_col = table.column(schema->label());
  if (label_col < 0) {
    throw DataError(csv_path.string() + ": missing label column '" + schema->label() + "'");
  }
  const std::size_t s = schema->sensitive_index();
  std::vector<Individual> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    Individual ind;
    ind.x.resize(K);
    try {
      for (std::size_t k = 0; k < K; ++k) {
        ind.x[k] = schema->parse_value(k, cells[static_cast<std::size_t>(columns[k])]);
      }
      ind.y = csv::parse_double(cells[static_cast<std::size_t>(label_col)],
                                "label column '" + schema->label() + "'");
    } catch (const DataError& e) {
      throw DataError(csv_path.string() + " row " + std::to_string(r + 1) + ": " +
                      e.what());
    }
    ind.group = static_cast<std::size_t>(ind.x[s]);
    ind.row_id = r;
    rows.push_back(std::move(ind));
  }
  return Population(std::move(schema), std::move(rows));
}

Population load_csv(const std::filesystem::path& csv_path,
                    const std::filesystem::path& schema_path) {
  return load_csv(csv_path,
                  std::make_shared<const FeatureSchema>(FeatureSchema::load(schema_path)));
}

void write_csv(const Population& pop, std::ostream& out) {
  const auto& schema = pop.schema();
  const char d = schema.delimiter();
  auto header = schema.feature_names();
  header.push_back(schema.label());
  csv::write_row(out, header, d);
  std::vector<std::string> fields(header.size());
  for (const auto& ind : pop.individuals()) {
    for (std::size_t k = 0; k < schema.size(); ++k) {
      fields[k] = schema.format_value(k, ind.x[k]);
    }
    fields.back() = csv::format_double(ind.y);
    csv::write_row(out, fields, d);
  }
}

std::pair<Population, Population> split(const Population& pop, double train_fraction,
                                        std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  const std::size_t n = pop.size();
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng::substream(seed, "split");
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.index(i)]);
  }
  std::vector<std::size_t> first(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<std::size_t> second(order.begin() + static_cast<long>(n_train), order.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  auto gather = [&](const std::vector<std::size_t>& idx) {
    std::vector<Individual> rows;
    rows.reserve(idx.size());
    for (auto i : idx) rows.push_back(pop[i]);
    return rows;
  };
  try {
    return {pop.with_individuals(gather(first)), pop.with_individuals(gather(second))};
  } catch (const DataError& e) {
    throw DataError(std::string("split leaves a part without a group: ") + e.what());
  }
}

Population restrict_features(const Population& pop, FeatureFilter keep) {
  if (keep == FeatureFilter::kAll) return pop;
  const auto& schema = pop.schema();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < schema.size(); ++k) {
    if (schema.feature(k).is_mutable || k == schema.sensitive_index()) idx.push_back(k);
  }
  auto sub = std::make_shared<const FeatureSchema>(schema.subset(idx));
  std::vector<Individual> rows;
  rows.reserve(pop.size());
  for (const auto& ind : pop.individuals()) {
    Individual r{.y = ind.y, .group = ind.group, .row_id = ind.row_id};
    r.x.reserve(idx.size());
    for (auto k : idx) r.x.push_back(ind.x[k]);
    rows.push_back(std::move(r));
  }
  return Population(std::move(sub), std::move(rows));
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  spec.schema = std::make_shared<const FeatureSchema>(FeatureSchema::from_json(j));
  try {
    const auto& sizes = j.at("group_sizes");
    const auto& groups = spec.schema->groups();
    if (sizes.is_object()) {
      spec.group_sizes.assign(groups.size(), 0);
      for (const auto& [name, n] : sizes.items()) {
        auto g = spec.schema->group_index(name);
        if (!g) throw ConfigError("group_sizes names unknown group '" + name + "'");
        spec.group_sizes[*g] = n.get<std::size_t>();
      }
    } else {
      spec.group_sizes = sizes.get<std::vector<std::size_t>>();
    }
    if (spec.group_sizes.size() != groups.size()) {
      throw ConfigError("group_sizes must list every group");
    }
    spec.shift = j.value("shift", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  return spec;
}

namespace {

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

Population generate_synthetic(const SyntheticSpec& spec) {
  const auto& schema = *spec.schema;
  const std::size_t K = schema.size();
  const std::size_t s = schema.sensitive_index();
  Rng rng = Rng::substream(spec.seed, "synthetic");
  std::vector<Individual> rows;
  std::size_t row_id = 0;
  for (std::size_t g = 0; g < spec.group_sizes.size(); ++g) {
    const double offset = spec.shift * static_cast<double>(g);
    for (std::size_t n = 0; n < spec.group_sizes[g]; ++n) {
      Individual ind;
      ind.x.resize(K);
      ind.group = g;
      ind.row_id = row_id++;
      double score = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const auto& kind = schema.feature(k).kind;
        if (k == s) {
          ind.x[k] = static_cast<double>(g);
          continue;
        }
        if (kind.has_levels()) {
          const std::size_t L = kind.levels.size();
          const double tilt = kind.tag == KindTag::kCategorical ? offset : 0.0;
          std::vector<double> w(L);
          double total = 0.0;
          for (std::size_t l = 0; l < L; ++l) {
            w[l] = std::exp(tilt * static_cast<double>(l) / static_cast<double>(std::max<std::size_t>(1, L - 1)));
            total += w[l];
          }
          double u = rng.uniform() * total;
          std::size_t level = 0;
          while (level + 1 < L && u >= w[level]) {
            u -= w[level];
            ++level;
          }
          ind.x[k] = static_cast<double>(level);
          score += 0.5 * static_cast<double>(level) / static_cast<double>(std::max<std::size_t>(1, L - 1));
          continue;
        }
        const double z = rng.normal() + offset;
        if (kind.is_ordinal()) {
          const auto [lo, hi] = kind.range.value_or(std::make_pair(1.0, 5.0));
          const double mid = 0.5 * (lo + hi);
          ind.x[k] = std::clamp(std::round(mid + 0.25 * (hi - lo) * z), lo, hi);
        } else {
          ind.x[k] = round_to(10.0 + 3.0 * z, 0.01);
        }
        double coef = 0.3;
        if (kind.is_monotone()) {
          coef = kind.direction == Direction::kIncreasing ? 0.8 : -0.8;
        }
        score += coef * z;
      }
      ind.y = std::clamp(std::round(10.0 + score + rng.normal()), 0.0, 20.0);
      rows.push_back(std::move(ind));
    }
  }
  return Population(spec.schema, std::move(rows));
}

}  // namespace effortsim
