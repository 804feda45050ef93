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

#include "moviemat/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "moviemat/errors.hpp"

namespace moviemat {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning rate must be positive");
  }
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (!(l2_lambda >= 0.0)) throw UsageError("l2_lambda must be non-negative");
  if (patience < 0) throw UsageError("patience must be non-negative");
  if (!(divergence_limit > 0.0)) throw UsageError("divergence limit must be positive");
}

std::vector<Observation> build_observations(const Dataset& ds, const ModelVariant& variant) {
  TargetBuilder builder(variant, ds.schema());
  std::vector<Observation> out;
  out.reserve(ds.size());
  for (const auto& r : ds.records()) out.push_back({r.user, r.item, builder.build(r)});
  return out;
}

double loss(const FactorModel& model, std::span<const Observation> obs, double l2_lambda) {
  double total = 0.0;
  for (const auto& o : obs) {
    const auto p = predict_target(model, o.user, o.item);
    total += masked_frobenius_sq(p, o.target.values, o.target.mask);
  }
  if (l2_lambda > 0.0) {
    double reg = 0.0;
    for (const auto& u : model.all_user_factors()) reg += frobenius_sq(u);
    for (const auto& v : model.all_item_factors()) reg += frobenius_sq(v);
    total += l2_lambda * reg;
  }
  return total;
}

double loss(const FactorModel& model, const Dataset& ds, double l2_lambda) {
  if (ds.num_users() > model.num_users() || ds.num_items() > model.num_items()) {
    throw UsageError("dataset references users or items unknown to the model");
  }
  const auto obs = build_observations(ds, model.variant());
  return loss(model, obs, l2_lambda);
}

FactorGradient sample_gradient(const DenseMatrix& user, const DenseMatrix& item,
                               const TargetMatrix& target, double l2_lambda) {
  const std::size_t f = user.rows();
  const std::size_t k = user.cols();
  auto residual = matmul_transpose_left(user, item);
  if (!residual.same_shape(target.values)) throw UsageError("target shape does not match model");
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      residual(r, c) = target.mask(r, c) ? residual(r, c) - target.values(r, c) : 0.0;
    }
  }

  // dL/dU = 2 V E^T + 2 l2 U ;  dL/dV = 2 U E + 2 l2 V
  FactorGradient g{DenseMatrix(f, k), DenseMatrix(f, k)};
  for (std::size_t a = 0; a < f; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      double gu = 0.0;
      double gv = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        gu += item(a, c) * residual(b, c);
        gv += user(a, c) * residual(c, b);
      }
      g.user(a, b) = 2.0 * gu + 2.0 * l2_lambda * user(a, b);
      g.item(a, b) = 2.0 * gv + 2.0 * l2_lambda * item(a, b);
    }
  }
  return g;
}

void sgd_step(FactorModel& model, const Observation& obs, double learning_rate, double l2_lambda,
              double divergence_limit) {
  auto& u = model.user_factors(obs.user);
  auto& v = model.item_factors(obs.item);
  const auto g = sample_gradient(u, v, obs.target, l2_lambda);
  scaled_add_in_place(u, -learning_rate, g.user);
  scaled_add_in_place(v, -learning_rate, g.item);
  auto exploded = [&](const DenseMatrix& m) {
    for (double x : m.entries()) {
      if (!(std::abs(x) <= divergence_limit)) return true;
    }
    return false;
  };
  if (exploded(u) || exploded(v)) throw DivergenceError("parameter magnitude exceeded limit");
}

VisitOrder::VisitOrder(std::size_t n, std::uint64_t seed, bool shuffle)
    : rng_(seed), shuffle_(shuffle), order_(n) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

const std::vector<std::size_t>& VisitOrder::next() {
  if (shuffle_) rng_.shuffle(std::span<std::size_t>(order_));
  return order_;
}

TrainTrace train(FactorModel& model, std::span<const Observation> obs, const TrainConfig& cfg) {
  cfg.validate();
  for (const auto& o : obs) {
    if (o.user >= model.num_users() || o.item >= model.num_items()) {
      throw UsageError("observation references a user or item unknown to the model");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  TrainTrace trace;
  trace.initial_loss = loss(model, obs, cfg.l2_lambda);

  VisitOrder order(obs.size(), cfg.seed, cfg.shuffle_each_epoch);
  double best = trace.initial_loss;
  int stale = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto& visit = order.next();
    for (std::size_t pos = 0; pos < visit.size(); ++pos) {
      try {
        sgd_step(model, obs[visit[pos]], cfg.learning_rate, cfg.l2_lambda, cfg.divergence_limit);
      } catch (const DivergenceError&) {
        throw DivergenceError("training diverged at learning rate " +
                                  std::to_string(cfg.learning_rate),
                              epoch, static_cast<long>(visit[pos]));
      }
    }
    const double current = loss(model, obs, cfg.l2_lambda);
    if (!std::isfinite(current)) {
      throw DivergenceError("training loss is not finite", epoch);
    }
    trace.epoch_loss.push_back(current);
    if (cfg.patience > 0) {
      if (current < best) {
        best = current;
        stale = 0;
      } else if (++stale >= cfg.patience) {
        break;
      }
    }
  }
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

TrainTrace train(FactorModel& model, const Dataset& ds, const TrainConfig& cfg) {
  const auto obs = build_observations(ds, model.variant());
  return train(model, obs, cfg);
}

}  // namespace moviemat
