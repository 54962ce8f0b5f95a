// Copyright 2026 The BSPGC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "bspgc/errors.hpp"

namespace bspgc {

// Rows are observations; row-major keeps each observation contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const Matrix& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

// Lower-triangular L with L L^T = s. Only the lower triangle of s is read
// after the symmetry check.
inline Matrix cholesky(const Matrix& s) {
  if (s.rows() != s.cols())
    throw std::invalid_argument("cholesky: matrix is not square");
  const double scale = std::max(1.0, max_abs(s));
  if (!is_symmetric(s, 1e-12 * scale))
    throw std::invalid_argument("cholesky: matrix is not symmetric");
  const Eigen::Index n = s.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = s(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 1e-14 * scale)) throw NotPositiveDefinite(std::size_t(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

// Solves L z = b in place for lower-triangular L.
template <class Vec>
void forward_solve_in_place(const Matrix& l, Vec& b) {
  const Eigen::Index n = l.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = b[i];
    for (Eigen::Index k = 0; k < i; ++k) v -= l(i, k) * b[k];
    b[i] = v / l(i, i);
  }
}

inline Matrix covariance_to_correlation(const Matrix& cov) {
  const Eigen::Index m = cov.rows();
  Matrix r(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      r(i, j) = i == j ? 1.0 : cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
  return r;
}

}  // namespace bspgc
