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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "moviemat/dataset.hpp"
#include "moviemat/model.hpp"

namespace moviemat {

struct MetricsReport {
  double mae = 0.0;
  double rmse = 0.0;
  double dme = 0.0;
  std::size_t top_k = 10;
  std::size_t n_eval = 0;
};

double mae(std::span<const double> pred, std::span<const double> truth);
double rmse(std::span<const double> pred, std::span<const double> truth);

// Training-set popularity rank of every item: 1 = most rated, ties go to the
// smaller item index. Items never rated in training rank last.
std::vector<std::size_t> popularity_ranks(const Dataset& train);

// Degree of Matthew Effect: minus the least-squares slope of
// ln(frequency) against ln(popularity rank), over items with frequency > 0.
// Throws UsageError when fewer than two items have positive frequency.
double dme_from_frequencies(std::span<const std::size_t> frequency,
                            std::span<const std::size_t> popularity_rank);

// Score of item `item` for user `user`; higher ranks first.
using ScoreFn = std::function<double(std::size_t user, std::size_t item)>;

// For each user: the top_k items not rated by that user in `train`, by score
// descending with ties to the smaller index. Returns per-item counts.
std::vector<std::size_t> recommendation_frequency(const ScoreFn& score, const Dataset& train,
                                                  std::span<const std::size_t> eval_users,
                                                  std::size_t top_k);

double degree_of_matthew_effect(const ScoreFn& score, const Dataset& train,
                                std::span<const std::size_t> eval_users, std::size_t top_k);
double degree_of_matthew_effect(const FactorModel& model, const Dataset& train,
                                std::span<const std::size_t> eval_users, std::size_t top_k);

// Distinct users of `ds`, ascending by dense index.
std::vector<std::size_t> users_in(const Dataset& ds);

// MAE/RMSE over clamped test predictions and DME over the test users.
MetricsReport evaluate(const FactorModel& model, const Dataset& train, const Dataset& test,
                       std::size_t top_k);

std::string report_to_json(const MetricsReport& report);

// Human-readable statement of the DME definition, embedded in reports.
extern const char* const kDmeDefinition;

}  // namespace moviemat
