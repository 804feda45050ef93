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

#include <string>
#include <string_view>

#include "moviemat/model.hpp"

namespace moviemat {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON document. Doubles are written in shortest round-trip
// decimal form, so load(save(m)) == m bit for bit.
std::string model_to_json(const FactorModel& model);
FactorModel model_from_json(std::string_view text);

void save_model(const FactorModel& model, const std::string& path);
FactorModel load_model(const std::string& path);

}  // namespace moviemat
