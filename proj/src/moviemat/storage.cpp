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

#include "moviemat/storage.hpp"

#include <array>
#include <cstdio>

#include "moviemat/errors.hpp"

namespace moviemat {

namespace {
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw UsageError("storage estimate overflows 64-bit byte count");
  }
  return out;
}
}  // namespace

std::uint64_t tensor_storage_bytes(std::span<const std::uint64_t> dims,
                                   std::uint64_t bytes_per_value) {
  if (dims.empty()) throw UsageError("tensor needs at least one dimension");
  if (bytes_per_value == 0) throw UsageError("bytes per value must be positive");
  std::uint64_t total = bytes_per_value;
  for (auto d : dims) {
    if (d == 0) throw UsageError("tensor dimensions must be positive");
    total = checked_mul(total, d);
  }
  return total;
}

std::uint64_t matmat_storage_bytes(std::uint64_t k, std::uint64_t records,
                                   std::uint64_t bytes_per_value) {
  if (k == 0 || records == 0 || bytes_per_value == 0) {
    throw UsageError("k, record count and bytes per value must be positive");
  }
  return checked_mul(checked_mul(checked_mul(k, k), records), bytes_per_value);
}

std::string format_binary_size(std::uint64_t bytes) {
  static constexpr std::array<const char*, 7> kUnits = {"B", "KB", "MB", "GB", "TB", "PB", "EB"};
  if (bytes < 1024) return std::to_string(bytes) + " B";
  std::size_t unit = 0;
  long double value = static_cast<long double>(bytes);
  while (value >= 1024.0L && unit + 1 < kUnits.size()) {
    value /= 1024.0L;
    ++unit;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1Lf %s", value, kUnits[unit]);
  return buf;
}

}  // namespace moviemat
