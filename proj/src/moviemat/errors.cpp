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

#include "moviemat/errors.hpp"

namespace moviemat {

namespace {
std::string describe(const std::string& what, long epoch, long record) {
  std::string msg = what;
  if (epoch >= 0) msg += " (epoch " + std::to_string(epoch);
  if (record >= 0) msg += (epoch >= 0 ? ", record " : " (record ") + std::to_string(record);
  if (epoch >= 0 || record >= 0) msg += ")";
  return msg;
}
}  // namespace

DivergenceError::DivergenceError(const std::string& what, long epoch, long record)
    : Error(ErrorKind::Divergence, describe(what, epoch, record)),
      epoch_(epoch),
      record_(record) {}

}  // namespace moviemat
