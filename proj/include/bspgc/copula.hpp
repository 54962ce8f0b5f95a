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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bspgc/errors.hpp"
#include "bspgc/linalg.hpp"
#include "bspgc/rng.hpp"
#include "bspgc/special_functions.hpp"

namespace bspgc {

enum class CorrelationMethod { KendallTau, SpearmanRho, GaussianRank };

namespace detail {

inline std::int64_t tied_pairs(std::span<const double> sorted) {
  std::int64_t total = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = std::int64_t(j - i);
    total += t * (t - 1) / 2;
    i = j;
  }
  return total;
}

// Sorts v ascending, returning the number of strict inversions.
inline std::int64_t sort_counting_inversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += std::int64_t(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

// 1-based ranks with ties given their average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double r = 0.5 * double(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = double(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw UndefinedCorrelation("correlation undefined for a constant column");
  return sxy / std::sqrt(sxx * syy);
}

inline void check_pair(std::span<const double> x, std::span<const double> y,
                       std::size_t min_n) {
  if (x.size() != y.size())
    throw std::invalid_argument("correlation: length mismatch");
  if (x.size() < min_n)
    throw UndefinedCorrelation("correlation: too few observations");
}

}  // namespace detail

// Kendall tau-b in O(n log n) (Knight's merge-sort algorithm).
inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
  detail::check_pair(x, y, 2);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  const auto n0 = std::int64_t(n) * std::int64_t(n - 1) / 2;
  std::int64_t n1 = 0, n3 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const auto t = std::int64_t(j - i);
    n1 += t * (t - 1) / 2;
    for (std::size_t a = i; a < j;) {
      std::size_t b = a + 1;
      while (b < j && y[order[b]] == y[order[a]]) ++b;
      const auto u = std::int64_t(b - a);
      n3 += u * (u - 1) / 2;
      a = b;
    }
    i = j;
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::int64_t swaps = detail::sort_counting_inversions(ys);
  const std::int64_t n2 = detail::tied_pairs(ys);

  const double denom = std::sqrt(double(n0 - n1) * double(n0 - n2));
  if (!(denom > 0.0))
    throw UndefinedCorrelation("kendall_tau: a variable is constant");
  return double(n0 - n1 - n2 + n3 - 2 * swaps) / denom;
}

inline double spearman_rho(std::span<const double> x,
                           std::span<const double> y) {
  detail::check_pair(x, y, 3);
  const auto rx = detail::average_ranks(x);
  const auto ry = detail::average_ranks(y);
  return detail::pearson(rx, ry);
}

// Pearson correlation of the normal scores Phi^{-1}(rank / (n + 1)).
inline double gaussian_rank_correlation(std::span<const double> x,
                                        std::span<const double> y) {
  detail::check_pair(x, y, 2);
  auto scores = [](std::span<const double> v) {
    auto r = detail::average_ranks(v);
    const double n1 = double(v.size() + 1);
    for (auto& s : r) s = std_normal_quantile(s / n1);
    return r;
  };
  const auto sx = scores(x);
  const auto sy = scores(y);
  return detail::pearson(sx, sy);
}

// Clips eigenvalues at eps and rescales to unit diagonal, repeating until the
// rescaled matrix keeps its smallest eigenvalue at eps.
inline Matrix nearest_pd(const Matrix& r, double eps = 1e-6) {
  if (!is_symmetric(r, 1e-12 * std::max(1.0, max_abs(r))))
    throw std::invalid_argument("nearest_pd: matrix is not symmetric");
  Matrix a = r;
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const Vector& lam = es.eigenvalues();
    if (lam.minCoeff() >= eps * (1.0 - 1e-6)) {
      if (iter == 0) return r;
      break;
    }
    const Vector clipped = lam.cwiseMax(eps);
    Matrix b = es.eigenvectors() * clipped.asDiagonal() *
               es.eigenvectors().transpose();
    const Vector d = b.diagonal().cwiseSqrt().cwiseInverse();
    a = d.asDiagonal() * b * d.asDiagonal();
    a = 0.5 * (a + a.transpose()).eval();
    a.diagonal().setOnes();
  }
  return a;
}

// Pairwise rank statistics converted to Gaussian-copula correlations, then
// repaired to a valid correlation matrix. Rows are observations.
inline Matrix estimate_correlation(const Matrix& data, CorrelationMethod method,
                                   double pd_eps = 1e-6) {
  const auto n = std::size_t(data.rows());
  const auto m = std::size_t(data.cols());
  if (n < (method == CorrelationMethod::SpearmanRho ? 3u : 2u))
    throw InsufficientData("estimate_correlation: too few rows");
  std::vector<std::vector<double>> cols(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) cols[j][i] = data(Eigen::Index(i), Eigen::Index(j));

  Matrix r = Matrix::Identity(Eigen::Index(m), Eigen::Index(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double v = 0.0;
      switch (method) {
        case CorrelationMethod::KendallTau:
          v = std::sin(0.5 * std::numbers::pi * kendall_tau(cols[i], cols[j]));
          break;
        case CorrelationMethod::SpearmanRho:
          v = 2.0 * std::sin(std::numbers::pi / 6.0 *
                             spearman_rho(cols[i], cols[j]));
          break;
        case CorrelationMethod::GaussianRank:
          v = gaussian_rank_correlation(cols[i], cols[j]);
          break;
      }
      r(Eigen::Index(i), Eigen::Index(j)) = v;
      r(Eigen::Index(j), Eigen::Index(i)) = v;
    }
  }
  // Constant columns only surface in the pairwise statistics; check m == 1.
  if (m == 1) {
    const auto& c = cols[0];
    if (std::all_of(c.begin(), c.end(), [&](double v) { return v == c[0]; }))
      throw UndefinedCorrelation("estimate_correlation: constant column");
  }
  return nearest_pd(r, pd_eps);
}

using QuantileFn = std::function<double(double)>;

// Gaussian copula C_R over arbitrary marginal quantile functions.
class CopulaModel {
 public:
  CopulaModel(std::vector<QuantileFn> marginals, Matrix correlation)
      : marginals_(std::move(marginals)), correlation_(std::move(correlation)) {
    const auto m = Eigen::Index(marginals_.size());
    if (m < 1) throw std::invalid_argument("CopulaModel: no marginals");
    if (correlation_.rows() != m || correlation_.cols() != m)
      throw std::invalid_argument("CopulaModel: correlation has wrong shape");
    if (!is_symmetric(correlation_))
      throw std::invalid_argument("CopulaModel: correlation not symmetric");
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::abs(correlation_(i, i) - 1.0) > 1e-12)
        throw std::invalid_argument("CopulaModel: diagonal must be 1");
    chol_ = cholesky(correlation_);
  }

  std::size_t dim() const noexcept { return marginals_.size(); }
  const std::vector<QuantileFn>& marginals() const noexcept {
    return marginals_;
  }
  const Matrix& correlation() const noexcept { return correlation_; }
  const Matrix& chol() const noexcept { return chol_; }

 private:
  std::vector<QuantileFn> marginals_;
  Matrix correlation_;
  Matrix chol_;
};

// k rows: y ~ N_m(0, R), u_i = Phi(y_i), x_i = F_i^{-1}(u_i).
inline Matrix sample_copula(const CopulaModel& model, std::size_t k,
                            RngStream& rng) {
  const auto m = Eigen::Index(model.dim());
  const Matrix& l = model.chol();
  Matrix out(Eigen::Index(k), m);
  std::vector<double> z(static_cast<std::size_t>(m));
  constexpr double u_min = 0x1.0p-1074;
  const double u_max = std::nextafter(1.0, 0.0);
  for (Eigen::Index row = 0; row < Eigen::Index(k); ++row) {
    for (auto& v : z) v = rng.normal();
    for (Eigen::Index i = 0; i < m; ++i) {
      double y = 0.0;
      for (Eigen::Index c = 0; c <= i; ++c) y += l(i, c) * z[std::size_t(c)];
      const double u = std::clamp(std_normal_cdf(y), u_min, u_max);
      out(row, i) = model.marginals()[std::size_t(i)](u);
    }
  }
  return out;
}

}  // namespace bspgc
