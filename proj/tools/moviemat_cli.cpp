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

// Command-line front end. Talks to the library exclusively through the C API.

#include <cstdio>
#include <fstream>
#include <memory>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moviemat/moviemat.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;

struct ExperimentFlags {
  std::string config;
  std::string dataset;
  std::string schema;
  std::vector<std::string> variants;
  std::vector<double> lr_grid;
  int epochs = 0;
  std::size_t latent_dim = 0;
  double test_fraction = 0.0;
  double l2 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t split_seed = 0;
  std::size_t top_k = 0;
  int patience = 0;
  unsigned threads = 0;
  std::string out;

  std::vector<std::pair<const char*, CLI::Option*>> options;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  auto add = [&](const char* key, CLI::Option* opt) { f.options.emplace_back(key, opt); };
  cmd->add_option("--config", f.config, "JSON experiment config (flags override it)");
  add("dataset", cmd->add_option("--dataset", f.dataset, "Ratings file (CSV/TSV)"));
  add("schema", cmd->add_option("--schema", f.schema, "Schema JSON (default: CoMoDa)"));
  add("variants", cmd->add_option("--variant", f.variants,
                                  "classic | moviemat | moviemat-plus (repeat for compare)")
                      ->delimiter(','));
  add("lr_grid", cmd->add_option("--lr-grid", f.lr_grid, "Comma-separated learning rates")
                     ->delimiter(','));
  add("epochs", cmd->add_option("--epochs", f.epochs, "SGD epochs per grid point"));
  add("latent_dim", cmd->add_option("--latent-dim", f.latent_dim, "Latent dimension f"));
  add("test_fraction", cmd->add_option("--test-fraction", f.test_fraction, "Holdout fraction"));
  add("l2_lambda", cmd->add_option("--l2", f.l2, "L2 regularization weight"));
  add("seed", cmd->add_option("--seed", f.seed, "Model seed (init and visiting order)"));
  add("split_seed", cmd->add_option("--split-seed", f.split_seed, "Train/test split seed"));
  add("top_k", cmd->add_option("--top-k", f.top_k, "Recommendation list length for DME"));
  add("patience", cmd->add_option("--patience", f.patience, "Early-stop patience (0 = off)"));
  add("threads", cmd->add_option("--threads", f.threads, "Grid worker threads (0 = auto)"));
  add("out", cmd->add_option("--out", f.out, "Output directory"));
}

// Config file first, then every flag that was given on the command line.
json merged_config(const ExperimentFlags& f) {
  json cfg = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::runtime_error("cannot open config '" + f.config + "'");
    cfg = json::parse(in);
    if (!cfg.is_object()) throw std::runtime_error("config must be a JSON object");
  }
  for (const auto& [key, opt] : f.options) {
    if (opt->count() == 0) continue;
    const std::string k = key;
    if (k == "dataset") cfg[k] = f.dataset;
    else if (k == "schema") cfg[k] = f.schema;
    else if (k == "variants") { cfg.erase("variant"); cfg[k] = f.variants; }
    else if (k == "lr_grid") cfg[k] = f.lr_grid;
    else if (k == "epochs") cfg[k] = f.epochs;
    else if (k == "latent_dim") cfg[k] = f.latent_dim;
    else if (k == "test_fraction") cfg[k] = f.test_fraction;
    else if (k == "l2_lambda") cfg[k] = f.l2;
    else if (k == "seed") cfg[k] = f.seed;
    else if (k == "split_seed") cfg[k] = f.split_seed;
    else if (k == "top_k") cfg[k] = f.top_k;
    else if (k == "patience") cfg[k] = f.patience;
    else if (k == "threads") cfg[k] = f.threads;
    else if (k == "out") cfg[k] = f.out;
  }
  return cfg;
}

int report(mm_status status) {
  if (status != MM_OK) std::cerr << "error: " << mm_last_error() << '\n';
  return static_cast<int>(status);
}

// Takes ownership of a C API string.
std::string take(char* s) {
  std::string out = s ? s : "";
  mm_string_free(s);
  return out;
}

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

int cmd_train(const ExperimentFlags& flags) {
  auto cfg = merged_config(flags);
  if (cfg.contains("variants") && cfg["variants"].size() != 1) {
    std::cerr << "error: train takes exactly one --variant\n";
    return kExitUsage;
  }
  char* summary = nullptr;
  const auto status = mm_run_train(cfg.dump().c_str(), &summary);
  if (status != MM_OK) return report(status);
  const auto s = json::parse(take(summary));
  std::cout << "variant  " << s["variant"].get<std::string>() << '\n'
            << "best lr  " << s["best_lr"].get<double>() << '\n'
            << "MAE      " << fmt(s["mae"].get<double>()) << '\n'
            << "RMSE     " << fmt(s["rmse"].get<double>()) << '\n'
            << "DME      " << fmt(s["dme"].get<double>()) << "  (top-" << s["top_k"].get<int>()
            << ")\n";
  for (const auto& a : s["artifacts"]) std::cout << "wrote    " << a.get<std::string>() << '\n';
  return 0;
}

int cmd_compare(const ExperimentFlags& flags) {
  auto cfg = merged_config(flags);
  if (!cfg.contains("variants") && !cfg.contains("variant")) {
    cfg["variants"] = {"classic", "moviemat", "moviemat-plus"};
  }
  char* summary = nullptr;
  const auto status = mm_run_compare(cfg.dump().c_str(), &summary);
  if (status != MM_OK) return report(status);
  const auto s = json::parse(take(summary));

  std::printf("%-14s %-8s %-8s %-8s %s\n", "variant", "lr", "MAE", "DME", "status");
  for (const auto& row : s["rows"]) {
    const bool ok = row["ok"].get<bool>();
    std::printf("%-14s %-8g %-8s %-8s %s\n", row["variant"].get<std::string>().c_str(),
                row["lr"].get<double>(), ok ? fmt(row["mae"].get<double>()).c_str() : "-",
                ok ? fmt(row["dme"].get<double>()).c_str() : "-",
                ok ? (row["best"].get<bool>() ? "best" : "ok")
                   : ("failed: " + row["error"].get<std::string>()).c_str());
  }
  std::cout << "wrote " << s["figure_csv"].get<std::string>() << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& user, const std::string& item,
                const std::vector<std::string>& fields) {
  mm_model* model = nullptr;
  if (auto st = mm_model_load(model_path.c_str(), &model); st != MM_OK) return report(st);
  std::unique_ptr<mm_model, decltype(&mm_model_free)> guard(model, mm_model_free);

  double rating = 0.0;
  if (auto st = mm_model_predict_rating(model, user.c_str(), item.c_str(), &rating); st != MM_OK) {
    return report(st);
  }
  std::cout << "rating " << fmt(rating, 6) << '\n';

  std::vector<std::string> names = fields;
  if (names.empty()) {
    for (std::size_t i = 0; i < mm_model_context_count(model); ++i) {
      names.emplace_back(mm_model_context_name(model, i));
    }
  }
  for (const auto& name : names) {
    double value = 0.0;
    auto st = mm_model_predict_context(model, user.c_str(), item.c_str(), name.c_str(), &value);
    if (st != MM_OK) return report(st);
    std::cout << name << ' ' << fmt(value, 6) << '\n';
  }
  return 0;
}

int cmd_storage(const std::string& mode, const std::vector<std::uint64_t>& dims, std::uint64_t k,
                std::uint64_t records, std::uint64_t bytes) {
  std::uint64_t total = 0;
  mm_status st;
  if (mode == "tensor") {
    if (dims.empty()) {
      std::cerr << "error: tensor mode needs --dims\n";
      return kExitUsage;
    }
    st = mm_storage_tensor(dims.data(), dims.size(), bytes, &total);
  } else {
    st = mm_storage_matmat(k, records, bytes, &total);
  }
  if (st != MM_OK) return report(st);
  char* human = nullptr;
  if (auto s2 = mm_format_size(total, &human); s2 != MM_OK) return report(s2);
  std::cout << total << " bytes (" << take(human) << ")\n";
  return 0;
}

int cmd_stats(const std::string& dataset, const std::string& schema_path) {
  mm_schema* schema = nullptr;
  if (!schema_path.empty()) {
    if (auto st = mm_schema_load(schema_path.c_str(), &schema); st != MM_OK) return report(st);
  }
  std::unique_ptr<mm_schema, decltype(&mm_schema_free)> schema_guard(schema, mm_schema_free);
  mm_dataset* ds = nullptr;
  if (auto st = mm_dataset_load(dataset.c_str(), schema, &ds); st != MM_OK) return report(st);
  std::unique_ptr<mm_dataset, decltype(&mm_dataset_free)> ds_guard(ds, mm_dataset_free);
  char* out = nullptr;
  if (auto st = mm_dataset_stats_json(ds, &out); st != MM_OK) return report(st);
  std::cout << take(out) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MovieMat: context-aware recommendation by matrix fitting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mm_version()));

  ExperimentFlags train_flags, compare_flags;
  auto* train = app.add_subcommand("train", "Grid-search one variant and write its artifacts");
  add_experiment_flags(train, train_flags);
  auto* compare = app.add_subcommand("compare", "Grid-search several variants on one split");
  add_experiment_flags(compare, compare_flags);

  std::string model_path, user, item;
  std::vector<std::string> fields;
  auto* predict = app.add_subcommand("predict", "Predict a rating and its context values");
  predict->add_option("--model", model_path, "Model JSON")->required();
  predict->add_option("--user", user, "User id")->required();
  predict->add_option("--item", item, "Item id")->required();
  predict->add_option("--context", fields, "Only estimate these context fields")->delimiter(',');

  std::string mode = "tensor";
  std::vector<std::uint64_t> dims;
  std::uint64_t k = 2, records = 0, bytes = 4;
  auto* storage = app.add_subcommand("storage-estimate", "Input storage of tensor vs matrix fitting");
  storage->add_option("--mode", mode, "tensor | matmat")
      ->check(CLI::IsMember({"tensor", "matmat"}));
  storage->add_option("--dims", dims, "Tensor dimensions, comma separated")->delimiter(',');
  storage->add_option("-k,--k", k, "Target matrix size (matmat)");
  storage->add_option("--records", records, "Number of ratings N (matmat)");
  storage->add_option("--bytes", bytes, "Bytes per stored value");

  std::string stats_dataset, stats_schema;
  auto* stats = app.add_subcommand("stats", "Dataset statistics as JSON");
  stats->add_option("--dataset", stats_dataset, "Ratings file")->required();
  stats->add_option("--schema", stats_schema, "Schema JSON (default: CoMoDa)");

  std::size_t syn_users = 121, syn_items = 1232, syn_records = 2296;
  std::uint64_t syn_seed = 1;
  std::string syn_out;
  auto* synth = app.add_subcommand("synth", "Write a CoMoDa-shaped synthetic dataset");
  synth->add_option("--users", syn_users, "Number of users");
  synth->add_option("--items", syn_items, "Number of items");
  synth->add_option("--records", syn_records, "Number of ratings");
  synth->add_option("--seed", syn_seed, "Generator seed");
  synth->add_option("--out", syn_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) return cmd_train(train_flags);
    if (*compare) return cmd_compare(compare_flags);
    if (*predict) return cmd_predict(model_path, user, item, fields);
    if (*storage) return cmd_storage(mode, dims, k, records, bytes);
    if (*stats) return cmd_stats(stats_dataset, stats_schema);
    if (*synth) {
      return report(mm_synthesize(syn_users, syn_items, syn_records, syn_seed, syn_out.c_str()));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
