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

#include "moviemat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "moviemat/errors.hpp"

namespace moviemat {

const char* const kDmeDefinition =
    "DME = -slope of the least-squares fit of ln(recommendation frequency) on "
    "ln(training popularity rank), over items recommended at least once; each "
    "test user receives the top-k items by predicted rating among items they did "
    "not rate in training (ties to the smaller item index)";

namespace {
void check_pair(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw UsageError("prediction/truth length mismatch");
  if (pred.empty()) throw UsageError("metrics need at least one prediction");
}
}  // namespace

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

std::vector<std::size_t> popularity_ranks(const Dataset& train) {
  const std::size_t n = train.num_items();
  std::vector<std::size_t> count(n, 0);
  for (const auto& r : train.records()) ++count[r.item];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return count[a] > count[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = pos + 1;
  return rank;
}

double dme_from_frequencies(std::span<const std::size_t> frequency,
                            std::span<const std::size_t> popularity_rank) {
  if (frequency.size() != popularity_rank.size()) {
    throw UsageError("frequency and rank tables differ in length");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < frequency.size(); ++i) {
    if (frequency[i] == 0) continue;
    if (popularity_rank[i] == 0) throw UsageError("popularity ranks start at 1");
    xs.push_back(std::log(static_cast<double>(popularity_rank[i])));
    ys.push_back(std::log(static_cast<double>(frequency[i])));
  }
  if (xs.size() < 2) {
    throw UsageError("DME needs at least two items with positive recommendation frequency");
  }
  const double n = static_cast<double>(xs.size());
  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw UsageError("DME regression is degenerate (identical ranks)");
  return -(sxy / sxx);
}

std::vector<std::size_t> recommendation_frequency(const ScoreFn& score, const Dataset& train,
                                                  std::span<const std::size_t> eval_users,
                                                  std::size_t top_k) {
  if (top_k == 0) throw UsageError("top_k must be at least 1");
  const std::size_t n = train.num_items();
  std::vector<std::vector<std::size_t>> rated(train.num_users());
  for (const auto& r : train.records()) rated[r.user].push_back(r.item);

  std::vector<std::size_t> freq(n, 0);
  std::vector<char> excluded(n, 0);
  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(n);
  for (std::size_t user : eval_users) {
    if (user >= rated.size()) throw UsageError("evaluation user outside the training index");
    for (std::size_t item : rated[user]) excluded[item] = 1;
    candidates.clear();
    for (std::size_t item = 0; item < n; ++item) {
      if (!excluded[item]) candidates.emplace_back(score(user, item), item);
    }
    for (std::size_t item : rated[user]) excluded[item] = 0;

    const std::size_t take = std::min(top_k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                      candidates.end(), [](const auto& a, const auto& b) {
                        return a.first > b.first || (a.first == b.first && a.second < b.second);
                      });
    for (std::size_t i = 0; i < take; ++i) ++freq[candidates[i].second];
  }
  return freq;
}

double degree_of_matthew_effect(const ScoreFn& score, const Dataset& train,
                                std::span<const std::size_t> eval_users, std::size_t top_k) {
  const auto freq = recommendation_frequency(score, train, eval_users, top_k);
  const auto ranks = popularity_ranks(train);
  return dme_from_frequencies(freq, ranks);
}

double degree_of_matthew_effect(const FactorModel& model, const Dataset& train,
                                std::span<const std::size_t> eval_users, std::size_t top_k) {
  if (train.num_items() > model.num_items()) {
    throw UsageError("training set references items unknown to the model");
  }
  return degree_of_matthew_effect(
      [&model](std::size_t u, std::size_t i) { return predict_score(model, u, i); }, train,
      eval_users, top_k);
}

std::vector<std::size_t> users_in(const Dataset& ds) {
  std::vector<std::size_t> users;
  users.reserve(ds.size());
  for (const auto& r : ds.records()) users.push_back(r.user);
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  return users;
}

MetricsReport evaluate(const FactorModel& model, const Dataset& train, const Dataset& test,
                       std::size_t top_k) {
  if (test.empty()) throw UsageError("evaluation needs a non-empty test set");
  std::vector<double> pred, truth;
  pred.reserve(test.size());
  truth.reserve(test.size());
  for (const auto& r : test.records()) {
    pred.push_back(predict_rating(model, r.user, r.item));
    truth.push_back(r.rating);
  }
  MetricsReport report;
  report.mae = mae(pred, truth);
  report.rmse = rmse(pred, truth);
  report.top_k = top_k;
  report.n_eval = pred.size();
  const auto eval_users = users_in(test);
  report.dme = degree_of_matthew_effect(model, train, eval_users, top_k);
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::json doc{{"mae", report.mae},     {"rmse", report.rmse},
                     {"dme", report.dme},     {"top_k", report.top_k},
                     {"n_eval", report.n_eval}, {"dme_definition", kDmeDefinition}};
  return doc.dump(2);
}

}  // namespace moviemat
