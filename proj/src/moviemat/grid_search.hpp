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
#include <span>
#include <string>
#include <vector>

#include "moviemat/dataset.hpp"
#include "moviemat/errors.hpp"
#include "moviemat/metrics.hpp"
#include "moviemat/model.hpp"
#include "moviemat/trainer.hpp"

namespace moviemat {

struct GridPoint {
  double learning_rate = 0.0;
  bool ok = false;
  std::string error;  // set when training or evaluation failed
  ErrorKind error_kind = ErrorKind::Data;
  MetricsReport metrics;
  TrainTrace trace;
  std::optional<FactorModel> model;  // kept only when requested
};

struct GridResult {
  std::vector<GridPoint> points;     // in grid order
  std::optional<std::size_t> best;   // lowest MAE; ties to the smaller rate
};

struct GridOptions {
  std::size_t latent_dim = 8;
  std::size_t top_k = 10;
  bool keep_models = false;
  // Worker threads; 0 picks the hardware concurrency. Results never depend on it.
  unsigned threads = 0;
};

// One freshly initialized model per learning rate, all seeded by
// base.seed, trained on `train` and scored on `test`. A failing grid point is
// recorded and does not stop the others.
GridResult grid_search(const ModelVariant& variant, const Dataset& train, const Dataset& test,
                       std::span<const double> lr_grid, const TrainConfig& base,
                       const GridOptions& options = {});

// Convenience overload that performs the seeded record split first.
GridResult grid_search(const ModelVariant& variant, const Dataset& ds,
                       std::span<const double> lr_grid, const TrainConfig& base,
                       double test_fraction, std::uint64_t split_seed,
                       const GridOptions& options = {});

}  // namespace moviemat
