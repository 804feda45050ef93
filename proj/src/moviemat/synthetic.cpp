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

#include "moviemat/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "moviemat/errors.hpp"
#include "moviemat/rng.hpp"

namespace moviemat {

namespace {

// Maps a standardized signal onto 1..levels through equal-mass normal cuts.
int discretize(double z, int levels) {
  const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
  const int v = 1 + static_cast<int>(p * levels);
  return std::clamp(v, 1, levels);
}

struct Factors {
  std::vector<std::vector<double>> vecs;
  std::vector<double> bias;
};

Factors draw_factors(std::size_t count, std::size_t dim, double bias_sd, Rng& rng) {
  Factors f;
  f.vecs.resize(count, std::vector<double>(dim));
  f.bias.resize(count);
  const double sd = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& x : f.vecs[i]) x = sd * rng.normal();
    f.bias[i] = bias_sd * rng.normal();
  }
  return f;
}

}  // namespace

void write_synthetic_csv(const SyntheticOptions& o, std::ostream& out) {
  if (o.users == 0 || o.items == 0 || o.records == 0 || o.latent_dim == 0) {
    throw UsageError("synthetic data needs positive users, items, records and latent_dim");
  }
  if (o.records > o.users * o.items) throw UsageError("more records than user-item pairs");
  Rng rng(o.seed);
  const auto users = draw_factors(o.users, o.latent_dim, 0.35, rng);
  const auto items = draw_factors(o.items, o.latent_dim, 0.45, rng);

  // Zipf-like item popularity over a shuffled item order.
  auto item_order = random_permutation(o.items, rng);
  std::vector<double> cdf(o.items);
  double acc = 0.0;
  for (std::size_t r = 0; r < o.items; ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), o.popularity_skew);
    cdf[r] = acc;
  }
  auto sample_item = [&] {
    const double u = rng.uniform() * acc;
    auto pos = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    return item_order[std::min(pos, o.items - 1)];
  };

  out << "userID,itemID,rating,age,sex,city,country,time,daytype,season,location,weather,"
         "social,endEmo,dominantEmo,mood\n";
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto maybe_missing = [&](int v) { return rng.uniform() < o.missing_rate ? -1 : v; };
  const double signal = o.context_signal;
  const double mix = std::sqrt(std::max(0.0, 1.0 - signal * signal));

  for (std::size_t n = 0; n < o.records; ++n) {
    std::size_t u = 0, i = 0;
    do {
      u = static_cast<std::size_t>(rng.below(o.users));
      i = sample_item();
    } while (!seen.emplace(u, i).second);

    double dot = 0.0;
    for (std::size_t d = 0; d < o.latent_dim; ++d) dot += users.vecs[u][d] * items.vecs[i][d];
    // dot has unit-order spread; z is its standardized interaction signal.
    const double z = dot * std::sqrt(static_cast<double>(o.latent_dim));
    const double raw = 3.6 + users.bias[u] + items.bias[i] + 0.8 * z + o.rating_noise * rng.normal();
    const int rating = std::clamp(static_cast<int>(std::lround(raw)), 1, 5);

    auto ctx = [&](double own) { return signal * z + mix * own + o.context_noise * rng.normal(); };
    const int location = discretize(ctx(rng.normal()), 3);
    const int mood = discretize(ctx(users.bias[u] / 0.35), 3);
    const int emotion = discretize(ctx(rng.normal()), 7);
    const int weather = discretize(0.5 * ctx(rng.normal()) + 0.8 * rng.normal(), 5);
    const int daytype = discretize(rng.normal(), 3);
    const int season = discretize(rng.normal(), 4);

    out << 'u' << u << ",m" << i << ',' << rating << ',' << 20 + rng.below(40) << ','
        << 1 + rng.below(2) << ",1,1," << 1 + rng.below(4) << ',' << maybe_missing(daytype) << ','
        << maybe_missing(season) << ',' << maybe_missing(location) << ','
        << maybe_missing(weather) << ',' << 1 + rng.below(7) << ',' << maybe_missing(emotion)
        << ',' << 1 + rng.below(7) << ',' << maybe_missing(mood) << '\n';
  }
}

Dataset synthetic_dataset(const SyntheticOptions& options) {
  std::stringstream buf;
  write_synthetic_csv(options, buf);
  return parse_dataset(buf, default_comoda_schema());
}

}  // namespace moviemat
