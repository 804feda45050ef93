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

#include "moviemat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "moviemat/errors.hpp"

namespace moviemat {

namespace {
std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}
}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw UsageError("matrix dimensions must be positive");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw UsageError("matrix dimensions must be positive");
  if (entries_.size() != rows * cols) {
    throw UsageError("matrix " + shape(rows, cols) + " needs " + std::to_string(rows * cols) +
                     " entries, got " + std::to_string(entries_.size()));
  }
  if (!all_finite()) throw UsageError("matrix entries must be finite");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t CellMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

DenseMatrix matmul_transpose_left(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw UsageError("matmul_transpose_left: " + shape(a.rows(), a.cols()) + " vs " +
                     shape(b.rows(), b.cols()));
  }
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.cols(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < a.rows(); ++t) acc += a(t, r) * b(t, c);
      out(r, c) = acc;
    }
  }
  return out;
}

double masked_frobenius_sq(const DenseMatrix& p, const DenseMatrix& t, const CellMask& mask) {
  if (!p.same_shape(t) || mask.rows() != p.rows() || mask.cols() != p.cols()) {
    throw UsageError("masked_frobenius_sq: shape mismatch " + shape(p.rows(), p.cols()) + ", " +
                     shape(t.rows(), t.cols()) + ", mask " + shape(mask.rows(), mask.cols()));
  }
  double acc = 0.0;
  for (std::size_t r = 0; r < p.rows(); ++r) {
    for (std::size_t c = 0; c < p.cols(); ++c) {
      if (!mask(r, c)) continue;
      const double d = p(r, c) - t(r, c);
      acc += d * d;
    }
  }
  return acc;
}

double frobenius_sq(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.entries()) acc += v * v;
  return acc;
}

void scaled_add_in_place(DenseMatrix& a, double alpha, const DenseMatrix& g) {
  if (!a.same_shape(g)) {
    throw UsageError("scaled_add_in_place: " + shape(a.rows(), a.cols()) + " vs " +
                     shape(g.rows(), g.cols()));
  }
  auto dst = a.entries();
  auto src = g.entries();
  bool finite = true;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] += alpha * src[i];
    finite = finite && std::isfinite(dst[i]);
  }
  if (!finite) throw DivergenceError("non-finite value after scaled update");
}

}  // namespace moviemat
