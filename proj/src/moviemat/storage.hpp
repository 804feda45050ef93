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

#include <cstdint>
#include <span>
#include <string>

namespace moviemat {

// Dense tensor footprint: product(dims) * bytes_per_value.
// Throws UsageError on a zero dimension or on 64-bit overflow.
std::uint64_t tensor_storage_bytes(std::span<const std::uint64_t> dims,
                                   std::uint64_t bytes_per_value);

// Matrix-fitting input footprint: k^2 * N * bytes_per_value.
std::uint64_t matmat_storage_bytes(std::uint64_t k, std::uint64_t records,
                                   std::uint64_t bytes_per_value);

// Binary units (1 KB = 2^10 bytes, ..., 1 TB = 2^40 bytes), one decimal,
// e.g. "384.0 TB". Values below 1 KB print as whole bytes.
std::string format_binary_size(std::uint64_t bytes);

}  // namespace moviemat
