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
#include <iosfwd>

#include "moviemat/dataset.hpp"

namespace moviemat {

// Generator for CoMoDa-shaped rating-with-context data. Ratings come from a
// biased low-rank model; location, mood and emotion are noisy discretizations
// of the same user-item interaction that drives the rating residual, so the
// context carries genuine signal about the rating.
struct SyntheticOptions {
  std::size_t users = 121;
  std::size_t items = 1232;
  std::size_t records = 2296;
  std::uint64_t seed = 1;
  std::size_t latent_dim = 3;
  double rating_noise = 0.6;      // std-dev of the rating noise, in stars
  double context_noise = 0.25;    // std-dev added before discretizing context
  double context_signal = 1.0;    // 0 makes every context field pure noise
  double popularity_skew = 0.8;   // Zipf exponent of item sampling
  double missing_rate = 0.02;     // chance that a context cell is -1
};

// Writes a header plus one row per record in the default schema's column
// layout (16 columns, comma separated).
void write_synthetic_csv(const SyntheticOptions& options, std::ostream& out);

Dataset synthetic_dataset(const SyntheticOptions& options);

}  // namespace moviemat
