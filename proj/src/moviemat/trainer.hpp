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
#include <span>
#include <vector>

#include "moviemat/dataset.hpp"
#include "moviemat/model.hpp"
#include "moviemat/rng.hpp"

namespace moviemat {

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 100;
  double l2_lambda = 0.0;
  std::uint64_t seed = 42;
  bool shuffle_each_epoch = true;
  // Stop after this many epochs without a new best training loss; 0 disables.
  int patience = 0;
  // Any parameter beyond this magnitude counts as divergence.
  double divergence_limit = 1e6;

  void validate() const;
};

// One training example: the target a (user, item) factor product must fit.
struct Observation {
  std::size_t user = 0;
  std::size_t item = 0;
  TargetMatrix target;
};

std::vector<Observation> build_observations(const Dataset& ds, const ModelVariant& variant);

struct TrainTrace {
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;  // loss after each completed epoch
  double wall_seconds = 0.0;

  double final_loss() const { return epoch_loss.empty() ? initial_loss : epoch_loss.back(); }
};

// Sum over observations of the masked squared residual, plus
// l2_lambda * (sum_i |U_i|^2 + sum_j |V_j|^2) over all factor matrices.
double loss(const FactorModel& model, std::span<const Observation> obs, double l2_lambda = 0.0);
double loss(const FactorModel& model, const Dataset& ds, double l2_lambda = 0.0);

struct FactorGradient {
  DenseMatrix user;
  DenseMatrix item;
};

// Gradient of |U^T V - T|^2 (masked) + l2 (|U|^2 + |V|^2) w.r.t. U and V.
FactorGradient sample_gradient(const DenseMatrix& user, const DenseMatrix& item,
                               const TargetMatrix& target, double l2_lambda);

// Simultaneous update of U_i and V_j from one cached residual.
// Throws DivergenceError when a parameter becomes non-finite or exceeds
// divergence_limit.
void sgd_step(FactorModel& model, const Observation& obs, double learning_rate, double l2_lambda,
              double divergence_limit = 1e6);

// Seeded per-epoch visiting order. Each call to next() yields a fresh
// permutation (or the identity when shuffling is off).
class VisitOrder {
 public:
  VisitOrder(std::size_t n, std::uint64_t seed, bool shuffle);
  const std::vector<std::size_t>& next();

 private:
  Rng rng_;
  bool shuffle_;
  std::vector<std::size_t> order_;
};

TrainTrace train(FactorModel& model, std::span<const Observation> obs, const TrainConfig& cfg);
TrainTrace train(FactorModel& model, const Dataset& ds, const TrainConfig& cfg);

}  // namespace moviemat
