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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bspgc/linalg.hpp"
#include "bspgc/rng.hpp"

namespace bspgc {

// mean + chol * z with z i.i.d. standard normal.
inline Vector sample_mvn(const Vector& mean, const Matrix& chol,
                         RngStream& rng) {
  if (chol.rows() != chol.cols() || chol.rows() != mean.size())
    throw std::invalid_argument("sample_mvn: dimension mismatch");
  const Eigen::Index m = mean.size();
  Vector z(m);
  for (Eigen::Index i = 0; i < m; ++i) z[i] = rng.normal();
  Vector out = mean;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k <= i; ++k) out[i] += chol(i, k) * z[k];
  return out;
}

// Exponentiates and normalizes log-weights after shifting by their maximum.
// Returns false if the result is unusable (all weights non-finite).
inline bool normalize_log_weights(std::span<const double> log_w,
                                  std::vector<double>& out) {
  out.assign(log_w.size(), 0.0);
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : log_w) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return false;
  double sum = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    out[i] = std::exp(log_w[i] - mx);
    sum += out[i];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) return false;
  for (double& w : out) w /= sum;
  return true;
}

// Dirichlet(alpha, ..., alpha) of length n. Gamma draws are handled in log
// space so alpha << 1 never collapses to all-zero weights.
inline std::vector<double> sample_dirichlet_symmetric(double alpha,
                                                      std::size_t n,
                                                      RngStream& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("sample_dirichlet_symmetric: alpha must be > 0");
  if (n == 0)
    throw std::invalid_argument("sample_dirichlet_symmetric: n must be >= 1");
  std::vector<double> log_g(n);
  std::vector<double> w;
  for (;;) {
    for (auto& v : log_g) v = rng.log_gamma(alpha);
    if (normalize_log_weights(log_g, w)) return w;
  }
}

}  // namespace bspgc
