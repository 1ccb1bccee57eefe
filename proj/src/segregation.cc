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

#include "effortsim/segregation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "effortsim/errors.h"

namespace effortsim {

double directed_distance(const MetricContext& ctx, std::size_t s, const Individual& i,
                         const Individual& j) {
  const auto& ref = *ctx.reference;
  double d = std::max(0.0, label_rank(ref, s, j.y) - label_rank(ref, s, i.y));
  for (auto k : ref.schema().mutable_indices()) {
    d += feature_effort(ref, ctx.params, s, k, i.x[k], j.x[k]);
  }
  return d;
}

double distance(const MetricContext& ctx, const Individual& i, const Individual& j) {
  double d = 0.0;
  for (std::size_t s = 0; s < ctx.reference->group_count(); ++s) {
    d = std::max(d, directed_distance(ctx, s, i, j));
  }
  return d;
}

Eigen::MatrixXd distance_matrix(const MetricContext& ctx, const Population& pop,
                                int threads) {
  const std::size_t n = pop.size();
  Eigen::MatrixXd d(n, n);
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
          d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              i == j ? 0.0 : distance(ctx, pop[i], pop[j]);
        }
      },
      threads);
  return d;
}

double focal_distance(const MetricContext& ctx, const Individual& ind,
                      const FocalPoint& focal) {
  const auto& ref = *ctx.reference;
  const auto mutable_idx = ref.schema().mutable_indices();
  if (focal.values.size() != mutable_idx.size()) {
    throw ConfigError("focal point does not match the mutable subspace");
  }
  double d = 0.0;
  for (std::size_t m = 0; m < mutable_idx.size(); ++m) {
    const auto k = mutable_idx[m];
    d += feature_effort(ref, ctx.params, ind.group, k, ind.x[k], focal.values[m]);
  }
  return d;
}

Neighborhoods build_focal_neighborhoods(const MetricContext& ctx,
                                        const std::vector<FocalPoint>& focal,
                                        const Population& pop) {
  if (focal.empty()) throw ConfigError("no focal points to build neighborhoods from");
  Neighborhoods out;
  out.construction = Neighborhoods::Construction::kFocalPoints;
  out.units.resize(focal.size());
  out.assignment.resize(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    std::size_t best = 0;
    double best_d = focal_distance(ctx, pop[i], focal[0]);
    for (std::size_t f = 1; f < focal.size(); ++f) {
      const double d = focal_distance(ctx, pop[i], focal[f]);
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    out.assignment[i] = best;
    auto& unit = out.units[best];
    unit.members.push_back(i);
    ++unit.total;
    if (pop[i].group == ctx.minority) ++unit.minority_count;
  }
  return out;
}

std::optional<double> atkinson(const Neighborhoods& neigh, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) return std::nullopt;
  double total = 0.0, minority = 0.0;
  for (const auto& u : neigh.units) {
    total += static_cast<double>(u.total);
    minority += static_cast<double>(u.minority_count);
  }
  if (total == 0.0) return std::nullopt;
  const double share = minority / total;
  if (share <= 0.0 || share >= 1.0) return std::nullopt;
  double sum = 0.0;
  for (const auto& u : neigh.units) {
    if (u.total == 0) continue;
    const double p = static_cast<double>(u.minority_count) / static_cast<double>(u.total);
    if (p <= 0.0 || p >= 1.0) continue;
    sum += std::pow(1.0 - p, 1.0 - beta) * std::pow(p, beta) * static_cast<double>(u.total);
  }
  sum /= total * share;
  const double a = 1.0 - share / (1.0 - share) * std::pow(sum, 1.0 / (1.0 - beta));
  return std::clamp(a, 0.0, 1.0);
}

double centralization(const Predictor& h, const Population& pop, std::size_t minority,
                      double threshold) {
  std::size_t members = 0, above = 0;
  for (const auto& ind : pop.individuals()) {
    if (ind.group != minority) continue;
    ++members;
    if (h.predict(ind.x) > threshold) ++above;
  }
  if (members == 0) throw DataError("centralization needs a nonempty minority group");
  return static_cast<double>(above) / static_cast<double>(members);
}

std::optional<double> absolute_clustering(const Eigen::MatrixXd& closeness,
                                          const std::vector<bool>& minority) {
  const auto n = static_cast<std::size_t>(closeness.rows());
  if (closeness.cols() != closeness.rows() || minority.size() != n) {
    throw ConfigError("closeness matrix and minority flags disagree in size");
  }
  double m = 0.0;
  for (bool b : minority) m += b ? 1.0 : 0.0;
  if (n < 2 || m == 0.0 || m == static_cast<double>(n)) return std::nullopt;
  const double big_n = static_cast<double>(n);
  double same = 0.0, all = 0.0, rows = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = closeness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double mi = minority[i] ? 1.0 : 0.0;
      const double mj = minority[j] ? 1.0 : 0.0;
      same += c * (mi / m) * mj;
      rows += c * (mi / m);
      all += c * (1.0 / big_n) * (m / big_n);
    }
  }
  const double denom = rows - all;
  if (denom == 0.0) return std::nullopt;
  return (same - all) / denom;
}

std::optional<double> absolute_clustering(const MetricContext& ctx, const Population& pop,
                                          int threads) {
  Eigen::MatrixXd c = distance_matrix(ctx, pop, threads);
  c = (-c.array()).exp().matrix();
  std::vector<bool> minority(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) minority[i] = pop[i].group == ctx.minority;
  return absolute_clustering(c, minority);
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

SpectralResult spectral_segregation(const Eigen::MatrixXd& r, double connectivity_threshold) {
  SpectralResult out;
  const auto n = static_cast<std::size_t>(r.rows());
  if (r.cols() != r.rows()) throw ConfigError("similarity matrix must be square");
  if (n == 0) {
    out.diagnostics = "empty group";
    return out;
  }
  Eigen::MatrixXd b = r;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (i == j || b(i, j) < connectivity_threshold) b(i, j) = 0.0;
    }
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) {
        const auto a = find_root(parent, i), c = find_root(parent, j);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      }
    }
  }
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find_root(parent, i);
    if (slot[root] == n) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(i);
  }
  out.components = components.size();
  out.scores.assign(n, 0.0);
  constexpr double kTolerance = 1e-10;
  constexpr int kMaxIterations = 10000;
  for (const auto& comp : components) {
    const auto m = static_cast<Eigen::Index>(comp.size());
    if (m == 1) continue;
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index c = 0; c < m; ++c) {
        sub(a, c) = b(static_cast<Eigen::Index>(comp[static_cast<std::size_t>(a)]),
                      static_cast<Eigen::Index>(comp[static_cast<std::size_t>(c)]));
      }
    }
    // Shifting by I keeps the iteration aperiodic without moving eigenvectors.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
      Eigen::VectorXd y = sub * x + x;
      y /= y.sum();
      const double change = (y - x).cwiseAbs().maxCoeff();
      x = y;
      if (change < kTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      out.diagnostics = "power iteration did not converge for a component of size " +
                        std::to_string(comp.size());
      out.value.reset();
      return out;
    }
    const double lambda = (sub * x).sum();
    for (Eigen::Index a = 0; a < m; ++a) {
      out.scores[comp[static_cast<std::size_t>(a)]] = lambda * x(a) * static_cast<double>(m);
    }
  }
  double total = 0.0;
  for (double s : out.scores) total += s;
  out.value = total / static_cast<double>(n);
  return out;
}

SpectralResult spectral_segregation(const MetricContext& ctx, const Population& pop,
                                    std::size_t group, double connectivity_threshold,
                                    int threads) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i].group == group) members.push_back(i);
  }
  const auto m = members.size();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  parallel_for(
      m,
      [&](std::size_t a) {
        for (std::size_t c = 0; c < m; ++c) {
          if (a == c) continue;
          r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) =
              std::exp(-distance(ctx, pop[members[a]], pop[members[c]]));
        }
      },
      threads);
  return spectral_segregation(r, connectivity_threshold);
}

nlohmann::json SegregationReport::to_json() const {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"population", population},
          {"atkinson", opt(atkinson)},
          {"centralization", opt(centralization)},
          {"aci", opt(aci)},
          {"ssi", opt(ssi)},
          {"focal_points", focal_points},
          {"metadata", metadata},
          {"diagnostics", diagnostics}};
}

std::vector<std::pair<std::string, std::optional<double>>> SegregationReport::measures() const {
  return {{"aci", aci}, {"atkinson", atkinson}, {"centralization", centralization}, {"ssi", ssi}};
}

SegregationReport segregation_report(const MetricContext& ctx, const Predictor& h,
                                     const Population& pop,
                                     const std::vector<FocalPoint>& focal,
                                     const SegregationOptions& options, double threshold,
                                     std::string label, int threads) {
  if (!(pop.schema() == ctx.reference->schema())) {
    throw ConfigError("population schema differs from the metric context");
  }
  SegregationReport rep;
  rep.population = std::move(label);
  rep.focal_points = focal.size();
  if (focal.empty()) {
    rep.diagnostics.push_back("no focal points: atkinson absent");
  } else {
    rep.atkinson = atkinson(build_focal_neighborhoods(ctx, focal, pop), options.beta);
    if (!rep.atkinson) rep.diagnostics.push_back("atkinson undefined for this population");
  }
  if (pop.group_size(ctx.minority) > 0) {
    rep.centralization = centralization(h, pop, ctx.minority, threshold);
  } else {
    rep.diagnostics.push_back("empty minority: centralization absent");
  }
  rep.aci = absolute_clustering(ctx, pop, threads);
  if (!rep.aci) rep.diagnostics.push_back("aci denominator is zero or a group is empty");
  auto ssi = spectral_segregation(ctx, pop, ctx.minority, options.ssi_threshold, threads);
  rep.ssi = ssi.value;
  if (!ssi.diagnostics.empty()) rep.diagnostics.push_back("ssi: " + ssi.diagnostics);
  rep.metadata = {{"beta", options.beta},
                  {"centralization_threshold", threshold},
                  {"ssi_threshold", options.ssi_threshold},
                  {"ssi_group", ctx.reference->group_name(ctx.minority)},
                  {"ssi_components", ssi.components},
                  {"minority", ctx.reference->group_name(ctx.minority)},
                  {"atkinson_form", "standard, without 1/N"},
                  {"quantile_tables", "initial population"},
                  {"focal_distance", "mutable efforts, no label term"},
                  {"label_convention", "role_model_label"}};
  return rep;
}

std::pair<SegregationReport, SegregationReport> compare(
    const MetricContext& ctx, const Predictor& h, const Population& before,
    const Population& after, const std::vector<FocalPoint>& focal,
    const SegregationOptions& options, int threads) {
  if (!(before.schema() == after.schema())) {
    throw ConfigError("compared populations have different schemas");
  }
  double threshold;
  if (options.threshold) {
    threshold = *options.threshold;
  } else {
    double sum = 0.0;
    for (double v : h.predict_all(before)) sum += v;
    threshold = sum / static_cast<double>(before.size());
  }
  return {segregation_report(ctx, h, before, focal, options, threshold, "initial", threads),
          segregation_report(ctx, h, after, focal, options, threshold, "impacted", threads)};
}

}  // namespace effortsim
