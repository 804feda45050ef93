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
#include <stdexcept>
#include <string>

namespace moviemat {

// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind {
  Usage = 1,       // bad arguments, configuration or shapes
  Data = 2,        // I/O failures and malformed input
  Divergence = 3,  // non-finite or exploding parameters during training
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

// Raised when a parameter becomes non-finite or exceeds the divergence limit.
// epoch and record are filled in by the trainer; -1 means "not applicable".
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what, long epoch = -1, long record = -1);

  long epoch() const noexcept { return epoch_; }
  long record() const noexcept { return record_; }

 private:
  long epoch_;
  long record_;
};

}  // namespace moviemat
