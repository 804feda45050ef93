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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moviemat {

// One reproducible experiment. Every random choice derives from `seed`
// (model initialization and visiting order) or `split_seed` (holdout split).
struct ExperimentConfig {
  std::string dataset;
  std::string schema;  // empty selects the bundled CoMoDa schema
  std::vector<std::string> variants{"moviemat"};
  std::size_t latent_dim = 8;
  int epochs = 100;
  std::vector<double> lr_grid{0.001, 0.005, 0.01, 0.05, 0.1};
  double l2_lambda = 0.0;
  std::uint64_t seed = 42;
  std::uint64_t split_seed = 7;
  double test_fraction = 0.2;
  std::size_t top_k = 10;
  int patience = 0;
  unsigned threads = 0;
  std::string out_dir = "out";

  void validate() const;
};

// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& config);

// Grid search for the first variant. Writes model.json (best grid point),
// trace.csv (lr,epoch,loss) and metrics.json to out_dir and returns a JSON
// summary. Throws when every grid point fails.
std::string run_train(const ExperimentConfig& config);

// Grid search for each variant on one shared split. Writes figure.csv
// (variant,lr,mae,dme), fig_mae.csv and fig_dme.csv (lr column plus one series
// per variant), comparison.json and one trace_<variant>.csv per variant.
// Per-variant failures are recorded, not fatal.
std::string run_compare(const ExperimentConfig& config);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace moviemat
