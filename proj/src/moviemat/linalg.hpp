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
#include <span>
#include <vector>

namespace moviemat {

// Row-major dense matrix of doubles. Entries are finite at construction;
// arithmetic that produces a non-finite value is reported by the kernels.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  // Zero-filled rows x cols matrix. Both dimensions must be positive.
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  bool all_finite() const noexcept;
  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Boolean cell selector; true marks a cell that participates in the loss.
class CellMask {
 public:
  CellMask() = default;
  CellMask(std::size_t rows, std::size_t cols, bool value = true)
      : rows_(rows), cols_(cols), cells_(rows * cols, value ? 1 : 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool value) { cells_[r * cols_ + c] = value ? 1 : 0; }

  std::size_t count() const noexcept;

  friend bool operator==(const CellMask&, const CellMask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

// result(r, c) = sum_t a(t, r) * b(t, c), i.e. a^T * b.
DenseMatrix matmul_transpose_left(const DenseMatrix& a, const DenseMatrix& b);

// Sum over mask-selected cells of (p - t)^2.
double masked_frobenius_sq(const DenseMatrix& p, const DenseMatrix& t, const CellMask& mask);

double frobenius_sq(const DenseMatrix& a);

// a <- a + alpha * g. Throws DivergenceError if any result is non-finite.
void scaled_add_in_place(DenseMatrix& a, double alpha, const DenseMatrix& g);

}  // namespace moviemat
