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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moviemat/errors.hpp"
#include "moviemat/grid_search.hpp"
#include "moviemat/rng.hpp"
#include "moviemat/synthetic.hpp"
#include "moviemat/trainer.hpp"
#include "support/bridge.hpp"
#include "support/oracles.hpp"
#include "support/planted.hpp"

using namespace moviemat;

using testing_support::mask_rows;
using testing_support::random_target;
using testing_support::rows_of;

TEST_CASE("TrainConfig validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.l2_lambda = -1.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("loss") {
  auto planted = testing_support::planted_problem(4, 2, 3, 4, 12, 1);
  SUBCASE("zero for an exactly fitting model") {
    CHECK(loss(planted.truth, planted.observations) == doctest::Approx(0.0).epsilon(1e-24));
  }
  SUBCASE("zero user factors: sum of squared unmasked targets") {
    auto model = planted.truth;
    for (std::size_t i = 0; i < model.num_users(); ++i) model.user_factors(i) = DenseMatrix(4, 2);
    double want = 0.0;
    for (const auto& o : planted.observations)
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
          if (o.target.mask(r, c)) want += o.target.values(r, c) * o.target.values(r, c);
    CHECK(loss(model, planted.observations) == doctest::Approx(want));
  }
  SUBCASE("tiny random instance against direct summation") {
    Rng rng(17);
    auto model = init_model(ModelVariant::movie_mat(), 2, 2, 2, 5, 5.0);
    std::vector<Observation> obs;
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t i = 0; i < 2; ++i) obs.push_back({u, i, random_target(2, rng, 0.5)});
    const double l2 = 0.3;
    double want = 0.0;
    for (const auto& o : obs) {
      want += oracle::sample_loss(rows_of(model.user_factors(o.user)),
                                  rows_of(model.item_factors(o.item)), rows_of(o.target.values),
                                  mask_rows(o.target.mask), 0.0);
    }
    for (const auto& m : model.all_user_factors())
      for (double x : m.entries()) want += l2 * x * x;
    for (const auto& m : model.all_item_factors())
      for (double x : m.entries()) want += l2 * x * x;
    CHECK(std::abs(loss(model, obs, l2) - want) <= 1e-10);
  }
  SUBCASE("dataset with unknown users") {
    auto ds = synthetic_dataset({});
    auto tiny = init_model(ModelVariant::classic_mf(), 2, 1, 1, 1, 5.0);
    CHECK_THROWS_AS(loss(tiny, ds), UsageError);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t f = 1 + rng.below(4);
    const std::size_t k = 1 + rng.below(3);
    const double l2 = trial % 2 == 0 ? 0.0 : 0.1;
    DenseMatrix u(f, k), v(f, k);
    for (double& x : u.entries()) x = rng.uniform(-1, 1);
    for (double& x : v.entries()) x = rng.uniform(-1, 1);
    const auto target = random_target(k, rng, 0.4);
    const auto g = sample_gradient(u, v, target, l2);

    auto ou = rows_of(u), ov = rows_of(v);
    const auto ot = rows_of(target.values);
    const auto om = mask_rows(target.mask);
    auto fn = [&] { return oracle::sample_loss(ou, ov, ot, om, l2); };
    const auto gu = oracle::central_difference(ou, fn, 1e-6);
    const auto gv = oracle::central_difference(ov, fn, 1e-6);
    for (std::size_t a = 0; a < f; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double du = std::abs(g.user(a, b) - gu[a][b]) / std::max(1.0, std::abs(gu[a][b]));
        const double dv = std::abs(g.item(a, b) - gv[a][b]) / std::max(1.0, std::abs(gv[a][b]));
        CHECK(du < 1e-5);
        CHECK(dv < 1e-5);
      }
  }
}

TEST_CASE("masked target cells never influence an update") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto model = init_model(ModelVariant::movie_mat_plus(), 3, 1, 1, rng.next(), 5.0);
    auto target = random_target(3, rng, 0.0);
    target.mask.set(0, 2, false);
    target.mask.set(2, 1, false);
    auto perturbed = target;
    perturbed.values(0, 2) = 123.0;
    perturbed.values(2, 1) = -7.0;
    auto a = model, b = model;
    sgd_step(a, {0, 0, target}, 0.05, 0.0);
    sgd_step(b, {0, 0, perturbed}, 0.05, 0.0);
    CHECK(a == b);
  }
}

TEST_CASE("sgd_step edge cases") {
  auto planted = testing_support::planted_problem(3, 2, 2, 2, 4, 9);
  SUBCASE("zero residual leaves parameters unchanged") {
    auto model = planted.truth;
    for (const auto& o : planted.observations) sgd_step(model, o, 0.1, 0.0);
    for (std::size_t i = 0; i < model.num_users(); ++i) {
      for (std::size_t e = 0; e < model.user_factors(i).size(); ++e) {
        CHECK(std::abs(model.user_factors(i).entries()[e] -
                       planted.truth.user_factors(i).entries()[e]) < 1e-12);
      }
    }
  }
  SUBCASE("zero learning rate leaves parameters unchanged") {
    auto model = init_model(ModelVariant::movie_mat(), 3, 2, 2, 4, 5.0);
    auto before = model;
    sgd_step(model, planted.observations[0], 0.0, 0.0);
    CHECK(model == before);
  }
  SUBCASE("exploding step reports divergence") {
    auto model = init_model(ModelVariant::movie_mat(), 3, 2, 2, 4, 5.0);
    CHECK_THROWS_AS(sgd_step(model, planted.observations[0], 1e9, 0.0), DivergenceError);
  }
}

TEST_CASE("train") {
  auto planted = testing_support::planted_problem(4, 2, 10, 12, 80, 3);
  SUBCASE("one epoch at learning rate zero is null training") {
    auto model = init_model(ModelVariant::movie_mat(), 4, 10, 12, 1, 5.0);
    auto before = model;
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.learning_rate = 1e-300;
    auto trace = train(model, std::span<const Observation>(planted.observations), cfg);
    REQUIRE(trace.epoch_loss.size() == 1);
    CHECK(trace.epoch_loss[0] == trace.initial_loss);
    CHECK(model == before);
  }
  SUBCASE("epochs = 0 is rejected") {
    auto model = init_model(ModelVariant::movie_mat(), 4, 10, 12, 1, 5.0);
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK_THROWS_AS(train(model, std::span<const Observation>(planted.observations), cfg),
                    UsageError);
  }
  SUBCASE("recovers an exactly factorizable problem") {
    auto model = init_model(ModelVariant::movie_mat(), 4, 10, 12, 77, 5.0);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 1000;
    auto trace = train(model, std::span<const Observation>(planted.observations), cfg);
    CHECK(trace.final_loss() < 1e-3 * trace.initial_loss);
  }
  SUBCASE("identical seeds give bitwise identical runs") {
    auto a = init_model(ModelVariant::movie_mat(), 4, 10, 12, 5, 5.0);
    auto b = a;
    TrainConfig cfg;
    cfg.epochs = 20;
    auto ta = train(a, std::span<const Observation>(planted.observations), cfg);
    auto tb = train(b, std::span<const Observation>(planted.observations), cfg);
    CHECK(a == b);
    CHECK(ta.epoch_loss == tb.epoch_loss);
  }
  SUBCASE("divergence aborts with epoch and record") {
    auto model = init_model(ModelVariant::movie_mat(), 4, 10, 12, 5, 5.0);
    TrainConfig cfg;
    cfg.learning_rate = 50.0;
    cfg.epochs = 10;
    try {
      train(model, std::span<const Observation>(planted.observations), cfg);
      FAIL("expected divergence");
    } catch (const DivergenceError& e) {
      CHECK(e.epoch() >= 0);
      CHECK(e.record() >= 0);
    }
  }
  SUBCASE("patience stops early once the loss stalls") {
    auto model = init_model(ModelVariant::movie_mat(), 4, 10, 12, 5, 5.0);
    TrainConfig cfg;
    cfg.learning_rate = 1e-300;
    cfg.epochs = 50;
    cfg.patience = 3;
    auto trace = train(model, std::span<const Observation>(planted.observations), cfg);
    CHECK(trace.epoch_loss.size() == 3);
  }
}

TEST_CASE("descent: loss rarely increases at lr 0.01 on factorizable data") {
  std::size_t transitions = 0, non_increasing = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto planted = testing_support::planted_problem(3, 2, 15, 20, 150, seed);
    auto model = init_model(ModelVariant::movie_mat(), 3, 15, 20, seed + 1000, 5.0);
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.epochs = 40;
    cfg.seed = seed;
    auto trace = train(model, std::span<const Observation>(planted.observations), cfg);
    double prev = trace.initial_loss;
    for (double l : trace.epoch_loss) {
      ++transitions;
      if (l <= prev) ++non_increasing;
      prev = l;
    }
  }
  CHECK(static_cast<double>(non_increasing) >= 0.95 * static_cast<double>(transitions));
}

TEST_CASE("k=1 training follows the scalar MF trajectory bitwise") {
  const std::size_t users = 5, items = 5, f = 3;
  Rng rng(8);
  std::vector<Observation> obs;
  std::vector<double> targets;
  for (std::size_t u = 0; u < users; ++u)
    for (std::size_t i = 0; i < items; ++i) {
      if (rng.uniform() < 0.4) continue;
      const double rating = static_cast<double>(1 + rng.below(5));
      TargetMatrix t{DenseMatrix(1, 1, {rating / 5.0}), CellMask(1, 1)};
      obs.push_back({u, i, t});
      targets.push_back(rating / 5.0);
    }
  auto model = init_model(ModelVariant::classic_mf(), f, users, items, 21, 5.0);
  oracle::ScalarMF scalar;
  for (const auto& m : model.all_user_factors()) scalar.users.emplace_back(m.entries().begin(), m.entries().end());
  for (const auto& m : model.all_item_factors()) scalar.items.emplace_back(m.entries().begin(), m.entries().end());

  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.l2_lambda = 0.01;
  cfg.epochs = 1;
  cfg.seed = 99;
  VisitOrder order(obs.size(), cfg.seed, true);
  for (int epoch = 0; epoch < 30; ++epoch) {
    for (std::size_t idx : order.next()) {
      sgd_step(model, obs[idx], cfg.learning_rate, cfg.l2_lambda);
      scalar.step(obs[idx].user, obs[idx].item, targets[idx], cfg.learning_rate, cfg.l2_lambda);
    }
  }
  for (std::size_t u = 0; u < users; ++u)
    for (std::size_t t = 0; t < f; ++t) CHECK(model.user_factors(u)(t, 0) == scalar.users[u][t]);
  for (std::size_t i = 0; i < items; ++i)
    for (std::size_t t = 0; t < f; ++t) CHECK(model.item_factors(i)(t, 0) == scalar.items[i][t]);
}

TEST_CASE("grid_search") {
  SyntheticOptions o;
  o.users = 40;
  o.items = 60;
  o.records = 800;
  auto ds = synthetic_dataset(o);
  auto [train_set, test_set] = split_train_test(ds, 0.2, 3);
  TrainConfig base;
  base.epochs = 10;
  GridOptions opts;
  opts.latent_dim = 4;

  SUBCASE("singleton grid is flagged best") {
    const std::vector<double> grid{0.01};
    auto r = grid_search(ModelVariant::movie_mat(), train_set, test_set, grid, base, opts);
    REQUIRE(r.points.size() == 1);
    CHECK(r.best == 0u);
    CHECK(r.points[0].ok);
  }
  SUBCASE("a diverging rate is recorded, the stable one wins") {
    const std::vector<double> grid{0.01, 1.0};
    auto r = grid_search(ModelVariant::movie_mat(), train_set, test_set, grid, base, opts);
    CHECK(r.best == 0u);
    CHECK_FALSE(r.points[1].ok);
    CHECK(r.points[1].error_kind == ErrorKind::Divergence);
    CHECK(r.points[1].error.find("diverged") != std::string::npos);
  }
  SUBCASE("duplicated grid entries give identical metrics, ties go to the first") {
    const std::vector<double> grid{0.005, 0.005, 0.01};
    opts.threads = 3;
    auto r = grid_search(ModelVariant::movie_mat(), train_set, test_set, grid, base, opts);
    CHECK(r.points[0].metrics.mae == r.points[1].metrics.mae);
    CHECK(r.points[0].metrics.dme == r.points[1].metrics.dme);
    CHECK(r.points[0].trace.epoch_loss == r.points[1].trace.epoch_loss);
    CHECK(r.best != 1u);
  }
  SUBCASE("results do not depend on the worker count") {
    const std::vector<double> grid{0.001, 0.005, 0.01, 0.05};
    opts.threads = 1;
    auto serial = grid_search(ModelVariant::movie_mat_plus(), train_set, test_set, grid, base, opts);
    opts.threads = 4;
    auto parallel = grid_search(ModelVariant::movie_mat_plus(), train_set, test_set, grid, base, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(serial.points[i].metrics.mae == parallel.points[i].metrics.mae);
      CHECK(serial.points[i].trace.epoch_loss == parallel.points[i].trace.epoch_loss);
    }
    CHECK(serial.best == parallel.best);
  }
  SUBCASE("split-and-search overload") {
    const std::vector<double> grid{0.01};
    auto r = grid_search(ModelVariant::classic_mf(), ds, grid, base, 0.2, 3, opts);
    auto direct = grid_search(ModelVariant::classic_mf(), train_set, test_set, grid, base, opts);
    CHECK(r.points[0].metrics.mae == direct.points[0].metrics.mae);
  }
  SUBCASE("empty grid") {
    const std::vector<double> grid;
    CHECK_THROWS_AS(grid_search(ModelVariant::movie_mat(), train_set, test_set, grid, base, opts),
                    UsageError);
  }
}
