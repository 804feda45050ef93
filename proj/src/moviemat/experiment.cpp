// Copyright 2026 The MovieMat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moviemat/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "moviemat/dataset.hpp"
#include "moviemat/errors.hpp"
#include "moviemat/grid_search.hpp"
#include "moviemat/metrics.hpp"
#include "moviemat/model_io.hpp"

namespace moviemat {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kRatingRule =
    "predicted rating = max_rating * mean(diagonal of U_i^T V_j), clamped to [1, max_rating]";
constexpr const char* kSplitRule = "record-level random holdout";

const std::set<std::string> kConfigKeys = {
    "dataset", "schema", "variant", "variants", "latent_dim", "epochs", "lr_grid", "l2_lambda",
    "seed", "split_seed", "test_fraction", "top_k", "patience", "threads", "out"};

struct LoadedData {
  Dataset full;
  Dataset train;
  Dataset test;
};

LoadedData load_and_split(const ExperimentConfig& cfg) {
  const ContextSchema schema = cfg.schema.empty() ? default_comoda_schema() : load_schema(cfg.schema);
  Dataset full = load_dataset(cfg.dataset, schema);
  if (full.empty()) throw DataError("dataset '" + cfg.dataset + "' contains no ratings");
  auto [train, test] = split_train_test(full, cfg.test_fraction, cfg.split_seed);
  if (test.empty()) throw UsageError("test split is empty; raise test_fraction");
  return {std::move(full), std::move(train), std::move(test)};
}

TrainConfig base_train_config(const ExperimentConfig& cfg) {
  TrainConfig t;
  t.epochs = cfg.epochs;
  t.l2_lambda = cfg.l2_lambda;
  t.seed = cfg.seed;
  t.patience = cfg.patience;
  return t;
}

GridOptions grid_options(const ExperimentConfig& cfg, bool keep_models) {
  GridOptions o;
  o.latent_dim = cfg.latent_dim;
  o.top_k = cfg.top_k;
  o.keep_models = keep_models;
  o.threads = cfg.threads;
  return o;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::string num_or_nan(const GridPoint& p, double value) {
  return p.ok ? format_double(value) : std::string("nan");
}

json point_json(const GridPoint& p) {
  json j{{"lr", p.learning_rate}, {"ok", p.ok}};
  if (p.ok) {
    j["mae"] = p.metrics.mae;
    j["rmse"] = p.metrics.rmse;
    j["dme"] = p.metrics.dme;
    j["n_eval"] = p.metrics.n_eval;
    j["initial_loss"] = p.trace.initial_loss;
    j["final_loss"] = p.trace.final_loss();
    j["epochs_run"] = p.trace.epoch_loss.size();
  } else {
    j["error"] = p.error;
  }
  return j;
}

std::string trace_csv(const GridResult& grid) {
  std::ostringstream out;
  out << "lr,epoch,loss\n";
  for (const auto& p : grid.points) {
    if (!p.ok) continue;
    const auto lr = format_double(p.learning_rate);
    out << lr << ",0," << format_double(p.trace.initial_loss) << '\n';
    for (std::size_t e = 0; e < p.trace.epoch_loss.size(); ++e) {
      out << lr << ',' << e + 1 << ',' << format_double(p.trace.epoch_loss[e]) << '\n';
    }
  }
  return out.str();
}

json protocol_json(const ExperimentConfig& cfg) {
  return {{"split", kSplitRule},
          {"test_fraction", cfg.test_fraction},
          {"split_seed", cfg.split_seed},
          {"seed", cfg.seed},
          {"latent_dim", cfg.latent_dim},
          {"epochs", cfg.epochs},
          {"l2_lambda", cfg.l2_lambda},
          {"top_k", cfg.top_k},
          {"rating_rule", kRatingRule},
          {"candidate_set", "all items minus the user's training items"},
          {"dme_definition", kDmeDefinition}};
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw UsageError("no dataset given");
  if (variants.empty()) throw UsageError("no variant given");
  for (const auto& v : variants) ModelVariant::from_name(v);
  if (latent_dim == 0) throw UsageError("latent_dim must be at least 1");
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (lr_grid.empty()) throw UsageError("lr_grid is empty");
  for (double lr : lr_grid) {
    if (!(lr > 0.0) || !std::isfinite(lr)) throw UsageError("learning rates must be positive");
  }
  if (!(l2_lambda >= 0.0)) throw UsageError("l2_lambda must be non-negative");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw UsageError("test_fraction must lie in (0, 1)");
  }
  if (top_k == 0) throw UsageError("top_k must be at least 1");
  if (patience < 0) throw UsageError("patience must be non-negative");
  if (out_dir.empty()) throw UsageError("output directory is empty");
}

ExperimentConfig config_from_json(std::string_view json_text) {
  ExperimentConfig cfg;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config: expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kConfigKeys.count(key)) throw UsageError("config: unknown key '" + key + "'");
  }
  try {
    cfg.dataset = doc.value("dataset", cfg.dataset);
    cfg.schema = doc.value("schema", cfg.schema);
    if (doc.contains("variants")) cfg.variants = doc.at("variants").get<std::vector<std::string>>();
    if (doc.contains("variant")) cfg.variants = {doc.at("variant").get<std::string>()};
    cfg.latent_dim = doc.value("latent_dim", cfg.latent_dim);
    cfg.epochs = doc.value("epochs", cfg.epochs);
    if (doc.contains("lr_grid")) cfg.lr_grid = doc.at("lr_grid").get<std::vector<double>>();
    cfg.l2_lambda = doc.value("l2_lambda", cfg.l2_lambda);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.split_seed = doc.value("split_seed", cfg.split_seed);
    cfg.test_fraction = doc.value("test_fraction", cfg.test_fraction);
    cfg.top_k = doc.value("top_k", cfg.top_k);
    cfg.patience = doc.value("patience", cfg.patience);
    cfg.threads = doc.value("threads", cfg.threads);
    cfg.out_dir = doc.value("out", cfg.out_dir);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json doc{{"dataset", cfg.dataset},       {"schema", cfg.schema},
           {"variants", cfg.variants},     {"latent_dim", cfg.latent_dim},
           {"epochs", cfg.epochs},         {"lr_grid", cfg.lr_grid},
           {"l2_lambda", cfg.l2_lambda},   {"seed", cfg.seed},
           {"split_seed", cfg.split_seed}, {"test_fraction", cfg.test_fraction},
           {"top_k", cfg.top_k},           {"patience", cfg.patience},
           {"threads", cfg.threads},       {"out", cfg.out_dir}};
  return doc.dump(2);
}

std::string run_train(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto variant = ModelVariant::from_name(cfg.variants.front());
  auto data = load_and_split(cfg);
  const auto out_dir = prepare_out_dir(cfg.out_dir);

  auto grid = grid_search(variant, data.train, data.test, cfg.lr_grid, base_train_config(cfg),
                          grid_options(cfg, true));
  if (!grid.best) {
    std::string reasons;
    bool all_diverged = true;
    for (const auto& p : grid.points) {
      reasons += "\n  lr " + format_double(p.learning_rate) + ": " + p.error;
      all_diverged = all_diverged && p.error_kind == ErrorKind::Divergence;
    }
    const std::string msg = "every grid point failed:" + reasons;
    if (all_diverged) throw DivergenceError(msg);
    throw Error(grid.points.front().error_kind, msg);
  }
  const auto& best = grid.points[*grid.best];

  const auto model_path = out_dir / "model.json";
  const auto trace_path = out_dir / "trace.csv";
  const auto metrics_path = out_dir / "metrics.json";
  save_model(*best.model, model_path.string());
  write_file(trace_path, trace_csv(grid));

  json grid_json = json::array();
  for (const auto& p : grid.points) grid_json.push_back(point_json(p));
  json metrics{{"variant", std::string(variant.name())},
               {"best_lr", best.learning_rate},
               {"mae", best.metrics.mae},
               {"rmse", best.metrics.rmse},
               {"dme", best.metrics.dme},
               {"top_k", best.metrics.top_k},
               {"n_eval", best.metrics.n_eval},
               {"train_records", data.train.size()},
               {"test_records", data.test.size()},
               {"grid", grid_json},
               {"protocol", protocol_json(cfg)}};
  write_file(metrics_path, metrics.dump(2) + "\n");

  json summary = metrics;
  summary.erase("grid");
  summary.erase("protocol");
  summary["artifacts"] = {model_path.string(), trace_path.string(), metrics_path.string()};
  return summary.dump(2);
}

std::string run_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.variants.size() < 2) throw UsageError("compare needs at least two variants");
  std::vector<ModelVariant> variants;
  for (const auto& name : cfg.variants) variants.push_back(ModelVariant::from_name(name));
  auto data = load_and_split(cfg);
  const auto out_dir = prepare_out_dir(cfg.out_dir);

  std::vector<GridResult> results;
  std::vector<std::string> failures(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    try {
      results.push_back(grid_search(variants[v], data.train, data.test, cfg.lr_grid,
                                    base_train_config(cfg), grid_options(cfg, false)));
    } catch (const Error& e) {
      failures[v] = e.what();
      GridResult failed;
      for (double lr : cfg.lr_grid) {
        GridPoint p;
        p.learning_rate = lr;
        p.error = e.what();
        p.error_kind = e.kind();
        failed.points.push_back(std::move(p));
      }
      results.push_back(std::move(failed));
    }
  }

  std::ostringstream figure, fig_mae, fig_dme;
  figure << "variant,lr,mae,dme\n";
  fig_mae << "lr";
  fig_dme << "lr";
  for (const auto& v : variants) {
    fig_mae << ',' << v.name();
    fig_dme << ',' << v.name();
  }
  fig_mae << '\n';
  fig_dme << '\n';
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (const auto& p : results[v].points) {
      figure << variants[v].name() << ',' << format_double(p.learning_rate) << ','
             << num_or_nan(p, p.metrics.mae) << ',' << num_or_nan(p, p.metrics.dme) << '\n';
    }
  }
  for (std::size_t g = 0; g < cfg.lr_grid.size(); ++g) {
    fig_mae << format_double(cfg.lr_grid[g]);
    fig_dme << format_double(cfg.lr_grid[g]);
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const auto& p = results[v].points[g];
      fig_mae << ',' << num_or_nan(p, p.metrics.mae);
      fig_dme << ',' << num_or_nan(p, p.metrics.dme);
    }
    fig_mae << '\n';
    fig_dme << '\n';
  }

  const auto figure_path = out_dir / "figure.csv";
  write_file(figure_path, figure.str());
  write_file(out_dir / "fig_mae.csv", fig_mae.str());
  write_file(out_dir / "fig_dme.csv", fig_dme.str());

  json rows = json::array();
  json best_rows = json::array();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const std::string name(variants[v].name());
    write_file(out_dir / ("trace_" + name + ".csv"), trace_csv(results[v]));
    for (std::size_t g = 0; g < results[v].points.size(); ++g) {
      json row = point_json(results[v].points[g]);
      row["variant"] = name;
      row["best"] = results[v].best && *results[v].best == g;
      rows.push_back(row);
    }
    json best{{"variant", name}};
    if (results[v].best) {
      const auto& b = results[v].points[*results[v].best];
      best["lr"] = b.learning_rate;
      best["mae"] = b.metrics.mae;
      best["dme"] = b.metrics.dme;
    } else {
      best["error"] = failures[v].empty() ? "every grid point failed" : failures[v];
    }
    best_rows.push_back(best);
  }
  json report{{"rows", rows},
              {"best", best_rows},
              {"train_records", data.train.size()},
              {"test_records", data.test.size()},
              {"protocol", protocol_json(cfg)}};
  write_file(out_dir / "comparison.json", report.dump(2) + "\n");

  json summary{{"rows", rows}, {"best", best_rows}, {"figure_csv", figure_path.string()}};
  return summary.dump(2);
}

}  // namespace moviemat
