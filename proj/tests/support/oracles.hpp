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

// Reference implementations used only by tests. They deliberately avoid the
// library's kernels so that agreement is meaningful.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;  // [row][col]

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<double>(c, 0.0)); }

// a^T * b by the textbook triple loop.
inline Mat transpose_left_product(const Mat& a, const Mat& b) {
  const std::size_t f = a.size(), ka = a[0].size(), kb = b[0].size();
  Mat out = zeros(ka, kb);
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t j = 0; j < kb; ++j)
      for (std::size_t t = 0; t < f; ++t) out[i][j] += a[t][i] * b[t][j];
  return out;
}

// Per-sample masked loss |U^T V - T|^2 + l2 (|U|^2 + |V|^2).
inline double sample_loss(const Mat& u, const Mat& v, const Mat& target,
                          const std::vector<std::vector<bool>>& mask, double l2) {
  const Mat p = transpose_left_product(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p[i].size(); ++j)
      if (mask[i][j]) s += (p[i][j] - target[i][j]) * (p[i][j] - target[i][j]);
  for (const auto& row : u)
    for (double x : row) s += l2 * x * x;
  for (const auto& row : v)
    for (double x : row) s += l2 * x * x;
  return s;
}

// Central finite-difference gradient of fn with respect to every entry of m.
inline Mat central_difference(Mat& m, const std::function<double()>& fn, double h) {
  Mat g = zeros(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      const double keep = m[i][j];
      m[i][j] = keep + h;
      const double up = fn();
      m[i][j] = keep - h;
      const double down = fn();
      m[i][j] = keep;
      g[i][j] = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// Ordinary least-squares slope through the normal equations in closed form
// n*Sxy - Sx*Sy over n*Sxx - Sx^2 (a different algebraic route from the
// centered form).
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Classic scalar matrix factorization with plain vectors: the rating target
// r/max is fitted by u_i . v_j with SGD on (u.v - t)^2 + l2 (|u|^2 + |v|^2).
struct ScalarMF {
  std::vector<std::vector<double>> users;
  std::vector<std::vector<double>> items;

  double dot(std::size_t i, std::size_t j) const {
    double p = 0.0;
    for (std::size_t t = 0; t < users[i].size(); ++t) p += users[i][t] * items[j][t];
    return p;
  }

  void step(std::size_t i, std::size_t j, double target, double lr, double l2) {
    const double e = dot(i, j) - target;
    auto& u = users[i];
    auto& v = items[j];
    for (std::size_t t = 0; t < u.size(); ++t) {
      const double gu = 2.0 * (v[t] * e) + 2.0 * l2 * u[t];
      const double gv = 2.0 * (u[t] * e) + 2.0 * l2 * v[t];
      u[t] = u[t] + (-lr) * gu;
      v[t] = v[t] + (-lr) * gv;
    }
  }
};

}  // namespace oracle
