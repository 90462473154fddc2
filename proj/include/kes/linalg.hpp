//
//   Copyright 2026 The kes Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kes/hashing.hpp"

namespace kes {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this project is desk scale, so a
// flat std::vector<double> is all we need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  Vec& data() { return data_; }
  const Vec& data() const { return data_; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

// y = M x
inline Vec matvec(const Matrix& m, const Vec& x) {
  if (x.size() != m.cols()) throw std::invalid_argument("matvec: shape mismatch");
  Vec y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

// y += s * (M x)
inline void matvec_acc(const Matrix& m, const double* x, double s, double* y) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * x[c];
    y[r] += s * acc;
  }
}

// y = M^T x
inline Vec matTvec(const Matrix& m, const Vec& x) {
  if (x.size() != m.rows()) throw std::invalid_argument("matTvec: shape mismatch");
  Vec y(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) y[c] += row[c] * x[r];
  }
  return y;
}

// y += s * (M^T x)
inline void matTvec_acc(const Matrix& m, const double* x, double s, double* y) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    const double xr = s * x[r];
    for (std::size_t c = 0; c < m.cols(); ++c) y[c] += row[c] * xr;
  }
}

// M += s * u v^T
inline void add_outer(Matrix& m, const double* u, const double* v, double s) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double* row = m.row(r);
    const double ur = s * u[r];
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += ur * v[c];
  }
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

inline Vec relu(Vec v) {
  for (double& x : v) x = relu(x);
  return v;
}

// Mask for the ReLU subgradient: 1 where the preactivation was positive.
inline double relu_mask(double pre) { return pre > 0.0 ? 1.0 : 0.0; }

inline void glorot_init(Matrix& m, DetRng& rng) {
  const double fan = static_cast<double>(m.rows() + m.cols());
  const double r = std::sqrt(6.0 / fan);
  for (double& x : m.data()) x = rng.uniform(-r, r);
}

inline double l1_diff(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

}  // namespace kes
