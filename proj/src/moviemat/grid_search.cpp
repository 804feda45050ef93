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

#include "moviemat/grid_search.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "moviemat/errors.hpp"

namespace moviemat {

namespace {

GridPoint run_point(const ModelVariant& variant, const Dataset& train_set, const Dataset& test_set,
                    const std::vector<Observation>& obs, double lr, const TrainConfig& base,
                    const GridOptions& options) {
  GridPoint point;
  point.learning_rate = lr;
  try {
    TrainConfig cfg = base;
    cfg.learning_rate = lr;
    auto model = init_model(variant, options.latent_dim, train_set.num_users(), train_set.num_items(),
                            base.seed, train_set.schema().max_rating,
                            layout_fields(variant, train_set.schema()));
    model.set_ids(train_set.shared_users(), train_set.shared_items());
    point.trace = train(model, std::span<const Observation>(obs), cfg);
    point.metrics = evaluate(model, train_set, test_set, options.top_k);
    point.ok = true;
    if (options.keep_models) point.model = std::move(model);
  } catch (const Error& e) {
    point.error = e.what();
    point.error_kind = e.kind();
  }
  return point;
}

}  // namespace

GridResult grid_search(const ModelVariant& variant, const Dataset& train, const Dataset& test,
                       std::span<const double> lr_grid, const TrainConfig& base,
                       const GridOptions& options) {
  if (lr_grid.empty()) throw UsageError("learning-rate grid is empty");
  for (double lr : lr_grid) {
    if (!(lr > 0.0)) throw UsageError("learning rates must be positive");
  }
  {
    TrainConfig probe = base;
    probe.learning_rate = lr_grid.front();
    probe.validate();
  }
  const auto obs = build_observations(train, variant);

  GridResult result;
  result.points.resize(lr_grid.size());
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(lr_grid.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < lr_grid.size(); i = next++) {
      result.points[i] = run_point(variant, train, test, obs, lr_grid[i], base, options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    if (!p.ok) continue;
    if (!result.best) {
      result.best = i;
      continue;
    }
    const auto& b = result.points[*result.best];
    if (p.metrics.mae < b.metrics.mae ||
        (p.metrics.mae == b.metrics.mae && p.learning_rate < b.learning_rate)) {
      result.best = i;
    }
  }
  return result;
}

GridResult grid_search(const ModelVariant& variant, const Dataset& ds,
                       std::span<const double> lr_grid, const TrainConfig& base,
                       double test_fraction, std::uint64_t split_seed,
                       const GridOptions& options) {
  auto [train, test] = split_train_test(ds, test_fraction, split_seed);
  return grid_search(variant, train, test, lr_grid, base, options);
}

}  // namespace moviemat
