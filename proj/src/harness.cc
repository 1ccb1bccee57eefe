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

#include "effortsim/harness.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "effortsim/csv.h"
#include "effortsim/dynamics.h"
#include "effortsim/errors.h"
#include "effortsim/fairness.h"
#include "effortsim/figures.h"
#include "effortsim/segregation.h"

namespace effortsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_bytes(const fs::path& path, bool config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    const std::string msg = "cannot open " + path.string();
    if (config) throw ConfigError(msg);
    throw DataError(msg);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FeatureFilter parse_filter(const std::string& s) {
  if (s == "all") return FeatureFilter::kAll;
  if (s == "mutable_plus_sensitive") return FeatureFilter::kMutablePlusSensitive;
  throw ConfigError("unknown feature set '" + s + "'");
}

std::string filter_name(FeatureFilter f) {
  return f == FeatureFilter::kAll ? "all" : "mutable_plus_sensitive";
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string optional_cell(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

ModelSpec parse_model(const json& m) {
  ModelSpec spec;
  spec.model = m.at("model").get<std::string>();
  spec.name = m.value("name", spec.model);
  static const std::vector<std::string> kKinds = {"linear", "ridge", "tree",
                                                  "mlp", "constrained", "constant"};
  if (std::find(kKinds.begin(), kKinds.end(), spec.model) == kKinds.end()) {
    throw ConfigError("unknown model '" + spec.model + "'");
  }
  if (spec.name.empty() || spec.name.find_first_of("/\\,\"") != std::string::npos) {
    throw ConfigError("model name '" + spec.name + "' is not a valid file stem");
  }
  spec.lambda = m.value("lambda", 0.0);
  spec.max_depth = m.value("max_depth", 5);
  spec.tau = m.value("tau", 0.0);
  if (m.contains("value")) spec.value = m.at("value").get<double>();
  spec.features = parse_filter(m.value("features", std::string("all")));
  spec.mlp.hidden = m.value("hidden", spec.mlp.hidden);
  spec.mlp.l2 = m.value("l2", spec.mlp.l2);
  spec.mlp.epochs = m.value("epochs", spec.mlp.epochs);
  spec.mlp.learning_rate = m.value("learning_rate", spec.mlp.learning_rate);
  if (!(spec.lambda >= 0.0) || !(spec.tau >= 0.0) || spec.max_depth < 0) {
    throw ConfigError("model '" + spec.name + "' has a negative hyperparameter");
  }
  return spec;
}

}  // namespace

json ModelSpec::to_json() const {
  json j = {{"name", name}, {"model", model}, {"features", filter_name(features)}};
  if (model == "ridge") j["lambda"] = lambda;
  if (model == "tree") j["max_depth"] = max_depth;
  if (model == "constrained") j["tau"] = tau;
  if (model == "constant" && value) j["value"] = *value;
  if (model == "mlp") {
    j["hidden"] = mlp.hidden;
    j["l2"] = mlp.l2;
    j["epochs"] = mlp.epochs;
    j["learning_rate"] = mlp.learning_rate;
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("data")) {
      c.data = resolve(j.at("data").get<std::string>());
      if (!j.contains("schema")) throw ConfigError("config with data needs a schema path");
      c.schema = resolve(j.at("schema").get<std::string>());
    } else if (j.contains("synthetic")) {
      json syn = j.at("synthetic");
      if (syn.is_string()) {
        const auto path = resolve(syn.get<std::string>());
        c.synthetic_path = path;
        try {
          syn = json::parse(read_bytes(path, true));
        } catch (const json::parse_error& e) {
          throw ConfigError(path.string() + ": " + e.what());
        }
      }
      if (!syn.contains("seed")) syn["seed"] = c.seed;
      c.synthetic = SyntheticSpec::from_json(syn);
    } else {
      throw ConfigError("config needs either data + schema or synthetic");
    }
    if (j.contains("split")) {
      const double f = j.at("split").at("train_fraction").get<double>();
      if (!(f > 0.0 && f < 1.0)) throw ConfigError("train_fraction must lie in (0, 1)");
      c.train_fraction = f;
    }
    if (!j.contains("models") || j.at("models").empty()) {
      throw ConfigError("config needs at least one model");
    }
    for (const auto& m : j.at("models")) c.models.push_back(parse_model(m));
    for (std::size_t a = 0; a < c.models.size(); ++a) {
      for (std::size_t b = a + 1; b < c.models.size(); ++b) {
        if (c.models[a].name == c.models[b].name) {
          throw ConfigError("duplicate model name '" + c.models[a].name + "'");
        }
      }
    }
    const json effort = j.value("effort", json::object());
    c.effort = EffortParams::from_json(effort);
    c.benefit = parse_benefit(effort.value("benefit", std::string("predicted")));
    c.delta_points = j.value("delta_points", c.delta_points);
    if (c.delta_points < 2) throw ConfigError("delta_points must be at least 2");
    if (j.contains("tau_grid")) c.tau_grid = j.at("tau_grid").get<std::vector<double>>();
    if (c.tau_grid.empty()) throw ConfigError("tau_grid must not be empty");
    for (double t : c.tau_grid) {
      if (!(t >= 0.0)) throw ConfigError("tau values must be nonnegative");
    }
    c.tau_features = parse_filter(j.value("tau_features", std::string("all")));
    c.beta = j.value("beta", c.beta);
    if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
    if (j.contains("minority")) c.minority = j.at("minority").get<std::string>();
    c.ssi_threshold = j.value("ssi_threshold", c.ssi_threshold);
    if (j.contains("centralization_threshold")) {
      c.centralization_threshold = j.at("centralization_threshold").get<double>();
    }
    c.shift_bins = j.value("shift_bins", c.shift_bins);
    if (c.shift_bins == 0) throw ConfigError("shift_bins must be positive");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.sha256 = sha256_hex(j.dump());
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path,
                                        std::optional<std::uint64_t> seed) {
  const std::string bytes = read_bytes(path, true);
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (seed && j.is_object()) j["seed"] = *seed;
  auto c = from_json(j, path.parent_path());
  c.sha256 = sha256_hex(bytes);
  return c;
}

PreparedData prepare_data(const ExperimentConfig& config) {
  std::optional<Population> full;
  std::vector<std::pair<std::string, std::string>> inputs;
  if (config.data) {
    auto schema = std::make_shared<const FeatureSchema>(FeatureSchema::load(*config.schema));
    full = load_csv(*config.data, schema);
    inputs.emplace_back(config.data->filename().string(),
                        sha256_hex(read_bytes(*config.data, false)));
    inputs.emplace_back(config.schema->filename().string(),
                        sha256_hex(read_bytes(*config.schema, true)));
  } else {
    full = generate_synthetic(*config.synthetic);
    if (config.synthetic_path) {
      inputs.emplace_back(config.synthetic_path->filename().string(),
                          sha256_hex(read_bytes(*config.synthetic_path, true)));
    }
  }
  std::size_t minority = full->smallest_group();
  if (config.minority) {
    auto g = full->schema().group_index(*config.minority);
    if (!g) throw ConfigError("minority names unknown group '" + *config.minority + "'");
    minority = *g;
  }
  if (config.train_fraction) {
    auto [train, test] = split(*full, *config.train_fraction, config.seed);
    return {*full, std::move(train), std::move(test), minority, std::move(inputs)};
  }
  return {*full, *full, *full, minority, std::move(inputs)};
}

TrainedModel train_model(const ModelSpec& spec, const PreparedData& data,
                         const ExperimentConfig& config) {
  Population train = restrict_features(data.train, spec.features);
  Population test = restrict_features(data.test, spec.features);
  std::shared_ptr<const Predictor> h;
  if (spec.model == "linear") {
    h = std::make_shared<LinearModel>(fit_linear(train));
  } else if (spec.model == "ridge") {
    h = std::make_shared<LinearModel>(fit_ridge(train, spec.lambda));
  } else if (spec.model == "tree") {
    h = std::make_shared<TreeModel>(fit_tree(train, spec.max_depth));
  } else if (spec.model == "mlp") {
    MlpOptions opts = spec.mlp;
    opts.seed = config.seed;
    h = std::make_shared<MlpModel>(fit_mlp(train, opts));
  } else if (spec.model == "constrained") {
    h = std::make_shared<LinearModel>(
        fit_constrained_linear(train, spec.tau, config.benefit, data.minority).model);
  } else {
    double value = 0.0;
    if (spec.value) {
      value = *spec.value;
    } else {
      for (const auto& ind : train.individuals()) value += ind.y;
      value /= static_cast<double>(train.size());
    }
    h = std::make_shared<ConstantModel>(train.schema().feature_names(), value);
  }
  FitReport fit = evaluate(*h, test);
  return {spec, std::move(h), std::move(train), std::move(test), std::move(fit)};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

OutputWriter::OutputWriter(fs::path dir, std::string command)
    : dir_(std::move(dir)), command_(std::move(command)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_.string());
}

void OutputWriter::close_stage() {
  if (stages_.empty()) return;
  stages_.back().seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
}

void OutputWriter::begin_stage(const std::string& name) {
  close_stage();
  stages_.push_back({name, {}, 0.0});
  started_ = std::chrono::steady_clock::now();
}

void OutputWriter::write(const std::string& name, const std::string& content) {
  if (stages_.empty()) begin_stage("output");
  for (const auto& s : stages_) {
    for (const auto& [f, _] : s.files) {
      if (f == name) throw std::logic_error("file written twice: " + name);
    }
  }
  std::ofstream out(dir_ / name, std::ios::binary);
  out << content;
  if (!out) throw DataError("cannot write " + (dir_ / name).string());
  stages_.back().files.emplace_back(name, sha256_hex(content));
}

void OutputWriter::finish(const ExperimentConfig& config, const PreparedData* data) {
  close_stage();
  const std::string timings_name = command_ + "_timings.json";
  json stages = json::array(), timings = json::array();
  for (const auto& s : stages_) {
    json files = json::array();
    for (const auto& [f, h] : s.files) files.push_back({{"path", f}, {"sha256", h}});
    stages.push_back({{"name", s.name}, {"files", files}});
    timings.push_back({{"stage", s.name}, {"seconds", s.seconds}});
  }
  json inputs = json::array();
  if (data) {
    for (const auto& [f, h] : data->inputs) inputs.push_back({{"path", f}, {"sha256", h}});
  }
  json manifest = {{"command", command_},
                   {"tool_version", std::string(kToolVersion)},
                   {"config_sha256", config.sha256},
                   {"seed", config.seed},
                   {"metric_population", "training split"},
                   {"inputs", inputs},
                   {"stages", stages},
                   {"unhashed", json::array({timings_name})}};
  const std::string text = manifest.dump(2) + "\n";
  std::ofstream(dir_ / (command_ + "_manifest.json"), std::ios::binary) << text;
  std::ofstream(dir_ / timings_name, std::ios::binary)
      << json({{"command", command_}, {"stages", timings}}).dump(2) << "\n";
}

void run_fairness(const ExperimentConfig& config, const fs::path& out) {
  OutputWriter w(out, "fairness");
  w.begin_stage("prepare");
  const auto data = prepare_data(config);
  std::vector<TrainedModel> models;
  for (const auto& spec : config.models) {
    w.begin_stage("train:" + spec.name);
    models.push_back(train_model(spec, data, config));
    w.write("model_" + spec.name + ".json", models.back().predictor->to_json().dump(2) + "\n");
  }
  w.begin_stage("metrics");
  std::ostringstream bounded, threshold, comparison;
  csv::write_row(bounded, {"model", "delta", "group", "value"});
  csv::write_row(threshold, {"model", "delta", "group", "value", "feasibility"});
  csv::write_row(comparison, {"model", "measure", "group", "value"});
  json reports = json::array();
  for (const auto& m : models) {
    const auto& name = m.spec.name;
    PairwiseTables tables(*m.predictor, m.train, config.effort, config.benefit);
    const auto effort_grid = linear_grid(tables.max_finite_effort(), config.delta_points);
    const auto reward_grid =
        linear_grid(std::max(0.0, tables.max_reward()), config.delta_points);
    const auto be = sweep_delta(Measure::kBoundedEffort, tables, effort_grid);
    const auto tr = sweep_delta(Measure::kThresholdReward, tables, reward_grid);
    be.write_csv_rows(bounded, name);
    tr.write_csv_rows(threshold, name);
    const auto er = effort_reward(tables);
    const auto [pos, neg] = residual_differences(*m.predictor, m.train);
    for (std::size_t g = 0; g < m.fit.group_names.size(); ++g) {
      csv::write_row(comparison, {name, "mae", m.fit.group_names[g],
                                  csv::format_double(m.fit.mae_per_group[g])});
    }
    csv::write_row(comparison, {name, "mae", "overall", csv::format_double(m.fit.mae_overall)});
    for (const auto* rep : {&er, &pos, &neg}) {
      const std::string measure(measure_name(rep->measure));
      for (std::size_t g = 0; g < rep->group_names.size(); ++g) {
        csv::write_row(comparison,
                       {name, measure, rep->group_names[g], optional_cell(rep->per_group[g])});
      }
      csv::write_row(comparison, {name, measure, "disparity", optional_cell(rep->disparity)});
    }
    auto curve_json = [](const DeltaCurve& c) {
      json values = json::array();
      for (const auto& row : c.values) {
        json r = json::array();
        for (const auto& v : row) r.push_back(optional_json(v));
        values.push_back(r);
      }
      json j = {{"measure", measure_name(c.measure)},
                {"deltas", c.deltas},
                {"groups", c.group_names},
                {"values", values}};
      if (!c.feasibility.empty()) j["feasibility"] = c.feasibility;
      return j;
    };
    reports.push_back({{"model", m.spec.to_json()},
                       {"fit", m.fit.to_json()},
                       {"effort_reward", er.to_json()},
                       {"positive_residual_difference", pos.to_json()},
                       {"negative_residual_difference", neg.to_json()},
                       {"bounded_effort", curve_json(be)},
                       {"threshold_reward", curve_json(tr)}});
  }
  w.write("bounded_effort.csv", bounded.str());
  w.write("threshold_reward.csv", threshold.str());
  w.write("fairness_comparison.csv", comparison.str());
  const json combined = {{"benefit", benefit_name(config.benefit)},
                         {"effort", config.effort.to_json()},
                         {"minority", data.full.group_name(data.minority)},
                         {"metric_population", "training split"},
                         {"metric_population_size", data.train.size()},
                         {"mae_population_size", data.test.size()},
                         {"models", reports}};
  w.write("fairness.json", combined.dump(2) + "\n");
  w.finish(config, &data);
}

namespace {

void write_segregation_rows(std::ostringstream& out, const std::string& model,
                            const SegregationReport& rep) {
  for (const auto& [measure, value] : rep.measures()) {
    csv::write_row(out, {model, measure, rep.population, optional_cell(value)});
  }
}

std::string population_csv(const Population& pop) {
  std::ostringstream out;
  write_csv(pop, out);
  return out.str();
}

}  // namespace

void run_simulate(const ExperimentConfig& config, const fs::path& out) {
  OutputWriter w(out, "simulate");
  w.begin_stage("prepare");
  const auto data = prepare_data(config);
  std::ostringstream seg;
  csv::write_row(seg, {"model", "measure", "population", "value"});
  json seg_json = json::array();
  SegregationOptions opts;
  opts.beta = config.beta;
  opts.threshold = config.centralization_threshold;
  opts.ssi_threshold = config.ssi_threshold;
  for (const auto& spec : config.models) {
    w.begin_stage("simulate:" + spec.name);
    const auto m = train_model(spec, data, config);
    const auto impact = simulate(*m.predictor, m.train, config.effort, config.benefit);
    w.write("impacted_" + spec.name + ".csv", population_csv(impact.impacted));
    w.write("impact_" + spec.name + ".json", impact.to_json(m.train).dump(2) + "\n");
    const auto shifts = feature_shift_report(m.train, impact.impacted, config.shift_bins);
    w.write("shift_" + spec.name + ".json", feature_shift_json(shifts).dump(2) + "\n");
    w.begin_stage("segregation:" + spec.name);
    MetricContext ctx{std::make_shared<const Population>(m.train), config.effort,
                      data.minority};
    const auto [before, after] =
        compare(ctx, *m.predictor, m.train, impact.impacted, impact.focal_points, opts);
    write_segregation_rows(seg, spec.name, before);
    write_segregation_rows(seg, spec.name, after);
    seg_json.push_back(
        {{"model", spec.to_json()}, {"initial", before.to_json()}, {"impacted", after.to_json()}});
  }
  w.write("segregation.csv", seg.str());
  w.write("segregation.json", seg_json.dump(2) + "\n");
  w.finish(config, &data);
}

void run_sweep_tau(const ExperimentConfig& config, const fs::path& out) {
  OutputWriter w(out, "sweep-tau");
  w.begin_stage("prepare");
  const auto data = prepare_data(config);
  const Population train = restrict_features(data.train, config.tau_features);
  const auto ctx = MetricContext{std::make_shared<const Population>(train), config.effort,
                                 data.minority};
  SegregationOptions opts;
  opts.beta = config.beta;
  opts.threshold = config.centralization_threshold;
  opts.ssi_threshold = config.ssi_threshold;
  std::ostringstream rows;
  csv::write_row(rows, {"tau", "measure", "value"});
  json detail = json::array();
  for (double tau : config.tau_grid) {
    w.begin_stage("tau:" + csv::format_double(tau));
    const auto fit = fit_constrained_linear(train, tau, config.benefit, data.minority);
    const auto impact = simulate(fit.model, train, config.effort, config.benefit);
    const auto [before, after] =
        compare(ctx, fit.model, train, impact.impacted, impact.focal_points, opts);
    const std::string t = csv::format_double(tau);
    std::map<std::string, std::optional<double>> values;
    for (const auto& [measure, value] : after.measures()) values[measure] = value;
    values["benefit_gap"] = fit.gap;
    for (const auto& [measure, value] : values) {
      csv::write_row(rows, {t, measure, optional_cell(value)});
    }
    std::size_t changed = 0;
    for (const auto& o : impact.outcomes) changed += o.changed ? 1 : 0;
    detail.push_back({{"tau", tau},
                      {"regime", fit.regime},
                      {"gap", fit.gap},
                      {"ols_gap", fit.ols_gap},
                      {"objective", fit.objective},
                      {"ols_objective", fit.ols_objective},
                      {"changed", changed},
                      {"model", fit.model.to_json()},
                      {"initial", before.to_json()},
                      {"impacted", after.to_json()}});
  }
  w.write("tau_sweep.csv", rows.str());
  w.write("tau_sweep.json",
          json({{"features", filter_name(config.tau_features)},
                {"benefit", benefit_name(config.benefit)},
                {"minority", data.full.group_name(data.minority)},
                {"runs", detail}})
                  .dump(2) +
              "\n");
  w.finish(config, &data);
}

namespace {

std::optional<csv::Table> read_report(const fs::path& path,
                                      const std::vector<std::string>& header) {
  if (!fs::exists(path)) return std::nullopt;
  auto table = csv::read_file(path);
  if (table.header != header) throw DataError(path.string() + ": unexpected header");
  if (table.rows.empty()) throw DataError(path.string() + ": no rows");
  return table;
}

std::optional<double> cell_value(const std::string& cell, const std::string& what) {
  if (cell.empty()) return std::nullopt;
  return csv::parse_double(cell, what);
}

std::vector<Series> curve_series(const csv::Table& t, const std::string& what) {
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  for (const auto& row : t.rows) {
    const std::string label = row[0] + " / " + row[2];
    auto [it, inserted] = index.try_emplace(label, series.size());
    if (inserted) series.push_back({label, {}});
    const auto v = cell_value(row[3], what + " value");
    if (v) series[it->second].points.emplace_back(csv::parse_double(row[1], what + " delta"), *v);
  }
  return series;
}

}  // namespace

void run_figures(const ExperimentConfig& config, const fs::path& out) {
  OutputWriter w(out, "figures");
  w.begin_stage("figures");
  std::vector<std::pair<std::string, std::string>> svgs;
  if (auto t = read_report(out / "bounded_effort.csv", {"model", "delta", "group", "value"})) {
    svgs.emplace_back("bounded_effort.svg",
                      line_chart_svg("Bounded-effort unfairness", "effort budget delta",
                                     "mean best reward", curve_series(*t, "bounded_effort")));
  }
  if (auto t = read_report(out / "threshold_reward.csv",
                           {"model", "delta", "group", "value", "feasibility"})) {
    svgs.emplace_back("threshold_reward.svg",
                      line_chart_svg("Threshold-reward unfairness", "reward threshold delta",
                                     "mean least effort", curve_series(*t, "threshold_reward")));
  }
  if (auto t = read_report(out / "fairness_comparison.csv",
                           {"model", "measure", "group", "value"})) {
    std::vector<BarGroup> groups;
    std::map<std::string, std::size_t> index;
    for (const auto& row : t->rows) {
      if (row[2] != "disparity") continue;
      const auto v = cell_value(row[3], "fairness_comparison value");
      if (!v) continue;
      auto [it, inserted] = index.try_emplace(row[0], groups.size());
      if (inserted) groups.push_back({row[0], {}});
      groups[it->second].bars.emplace_back(row[1], *v);
    }
    svgs.emplace_back("fairness_comparison.svg",
                      bar_chart_svg("Group disparity by measure", "disparity", groups));
  }
  if (auto t = read_report(out / "segregation.csv",
                           {"model", "measure", "population", "value"})) {
    std::vector<BarGroup> groups;
    std::map<std::string, std::size_t> index;
    for (const auto& row : t->rows) {
      const auto v = cell_value(row[3], "segregation value");
      if (!v) continue;
      const std::string label = row[0] + " " + row[1];
      auto [it, inserted] = index.try_emplace(label, groups.size());
      if (inserted) groups.push_back({label, {}});
      groups[it->second].bars.emplace_back(row[2], *v);
    }
    svgs.emplace_back("segregation.svg",
                      bar_chart_svg("Segregation before and after imitation", "index", groups));
  }
  if (auto t = read_report(out / "tau_sweep.csv", {"tau", "measure", "value"})) {
    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    for (const auto& row : t->rows) {
      auto [it, inserted] = index.try_emplace(row[1], series.size());
      if (inserted) series.push_back({row[1], {}});
      const auto v = cell_value(row[2], "tau_sweep value");
      if (v) series[it->second].points.emplace_back(csv::parse_double(row[0], "tau"), *v);
    }
    svgs.emplace_back("tau_sweep.svg",
                      line_chart_svg("Segregation under a welfare constraint",
                                     "constraint strength tau", "value", series));
  }
  if (svgs.empty()) throw DataError("no report CSVs found in " + out.string());
  for (const auto& [name, content] : svgs) w.write(name, content);
  w.finish(config, nullptr);
}

void run_synth(const ExperimentConfig& config, const fs::path& out) {
  if (!config.synthetic) throw ConfigError("synth needs a synthetic spec in the config");
  OutputWriter w(out, "synth");
  w.begin_stage("generate");
  const auto pop = generate_synthetic(*config.synthetic);
  w.write("synthetic.csv", population_csv(pop));
  w.write("synthetic_schema.json", pop.schema().to_json().dump(2) + "\n");
  w.finish(config, nullptr);
}

void run_all(const ExperimentConfig& config, const fs::path& out) {
  run_fairness(config, out);
  run_simulate(config, out);
  run_sweep_tau(config, out);
  run_figures(config, out);
}

void run_command(std::string_view command, const ExperimentConfig& config,
                 const fs::path& out) {
  if (command == "fairness") return run_fairness(config, out);
  if (command == "simulate") return run_simulate(config, out);
  if (command == "sweep-tau") return run_sweep_tau(config, out);
  if (command == "figures") return run_figures(config, out);
  if (command == "synth") return run_synth(config, out);
  if (command == "all") return run_all(config, out);
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

}  // namespace effortsim
