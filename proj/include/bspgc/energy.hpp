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
#include <concepts>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bspgc/linalg.hpp"
#include "bspgc/rng.hpp"

namespace bspgc {

// z = L^{-1} (x - mean). Maps N_m(mean, L L^T) onto N_m(0, I).
class Standardizer {
 public:
  Standardizer(Vector mean, Matrix chol)
      : mean_(std::move(mean)), chol_(std::move(chol)) {
    if (chol_.rows() != mean_.size() || chol_.cols() != mean_.size())
      throw std::invalid_argument("Standardizer: dimension mismatch");
  }

  static Standardizer from_covariance(Vector mean, const Matrix& cov) {
    Matrix l = cholesky(cov);
    return Standardizer(std::move(mean), std::move(l));
  }

  static Standardizer identity(std::size_t m) {
    const auto d = Eigen::Index(m);
    return Standardizer(Vector::Zero(d), Matrix::Identity(d, d));
  }

  std::size_t dim() const noexcept { return std::size_t(mean_.size()); }
  const Vector& mean() const noexcept { return mean_; }
  const Matrix& chol() const noexcept { return chol_; }

  Matrix apply(const Matrix& x) const {
    if (std::size_t(x.cols()) != dim())
      throw std::invalid_argument("Standardizer: column count mismatch");
    Matrix z = x.rowwise() - mean_.transpose();
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      auto row = z.row(r);
      forward_solve_in_place(chol_, row);
    }
    return z;
  }

 private:
  Vector mean_;
  Matrix chol_;
};

// E||Z - Z'|| for Z, Z' i.i.d. N_m(0, I): Z - Z' ~ N(0, 2I).
inline double expected_norm_between_std_mvn(std::size_t m) {
  if (m < 1) throw std::invalid_argument("dimension must be >= 1");
  const double h = 0.5 * double(m);
  return 2.0 * std::exp(std::lgamma(h + 0.5) - std::lgamma(h));
}

// E||z - Z||, Z ~ N_m(0, I). ||z - Z||^2 is noncentral chi-square with
// noncentrality lambda = ||z||^2, i.e. a Poisson(lambda / 2) mixture of
// central chi-squares with m + 2k degrees of freedom, whose root means are
// sqrt(2) Gamma((d + 1) / 2) / Gamma(d / 2).
inline double expected_norm_to_std_mvn_series(std::span<const double> z) {
  const std::size_t m = z.size();
  double lambda = 0.0;
  for (double v : z) lambda += v * v;
  const double half = 0.5 * lambda;
  auto log_term = [&](double k) {
    const double d = double(m) + 2.0 * k;
    const double log_pois =
        (half > 0.0 ? k * std::log(half) : (k == 0 ? 0.0 : -INFINITY)) - half -
        std::lgamma(k + 1.0);
    return log_pois + 0.5 * std::numbers::ln2 + std::lgamma(0.5 * (d + 1.0)) -
           std::lgamma(0.5 * d);
  };
  if (half == 0.0) return std::exp(log_term(0.0));
  const double mode = std::floor(half);
  const double peak = log_term(mode);
  double sum = 1.0;  // in units of exp(peak)
  for (double k = mode + 1;; k += 1.0) {
    const double t = std::exp(log_term(k) - peak);
    sum += t;
    if (t < 1e-17 * sum) break;
  }
  for (double k = mode - 1; k >= 0.0; k -= 1.0) {
    const double t = std::exp(log_term(k) - peak);
    sum += t;
    if (t < 1e-17 * sum) break;
  }
  return std::exp(peak) * sum;
}

namespace detail {

inline double distance(const double* a, const double* b, std::size_t m) {
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double mean_distance_to_pool(const double* z, const Matrix& pool) {
  const auto m = std::size_t(pool.cols());
  const double* p = pool.data();
  double s = 0.0;
  for (Eigen::Index k = 0; k < pool.rows(); ++k, p += m)
    s += distance(z, p, m);
  return s / double(pool.rows());
}

}  // namespace detail

enum class ExpectationMethod { MonteCarloPool, Series };

// Expectations against N_m(0, I): either a frozen pool of standard normal
// draws shared across a run, or the exact series.
class StdMvnExpectations {
 public:
  static StdMvnExpectations series(std::size_t m) {
    return StdMvnExpectations(m, ExpectationMethod::Series, Matrix());
  }

  static StdMvnExpectations monte_carlo(std::size_t m, std::size_t pool_size,
                                        RngStream& rng) {
    if (pool_size < 2)
      throw std::invalid_argument("expectation pool needs >= 2 draws");
    Matrix pool(static_cast<Eigen::Index>(pool_size), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < pool.rows(); ++i)
      for (Eigen::Index j = 0; j < pool.cols(); ++j) pool(i, j) = rng.normal();
    return StdMvnExpectations(m, ExpectationMethod::MonteCarloPool,
                              std::move(pool));
  }

  std::size_t dim() const noexcept { return dim_; }
  ExpectationMethod method() const noexcept { return method_; }
  const Matrix& pool() const noexcept { return pool_; }
  double between() const noexcept { return between_; }

  double to_point(const double* z) const {
    if (method_ == ExpectationMethod::Series)
      return expected_norm_to_std_mvn_series({z, dim_});
    return detail::mean_distance_to_pool(z, pool_);
  }

 private:
  StdMvnExpectations(std::size_t m, ExpectationMethod method, Matrix pool)
      : dim_(m),
        method_(method),
        pool_(std::move(pool)),
        between_(expected_norm_between_std_mvn(m)) {}

  std::size_t dim_;
  ExpectationMethod method_;
  Matrix pool_;
  double between_;
};

// Expectations against an arbitrary law represented by frozen draws (already
// in the standardized coordinates). The between-term is the pool U-statistic.
class EmpiricalExpectations {
 public:
  explicit EmpiricalExpectations(Matrix pool) : pool_(std::move(pool)) {
    if (pool_.rows() < 2)
      throw std::invalid_argument("expectation pool needs >= 2 draws");
    const auto m = std::size_t(pool_.cols());
    const auto k = pool_.rows();
    double s = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      double row = 0.0;
      for (Eigen::Index j = i + 1; j < k; ++j)
        row += detail::distance(&pool_(i, 0), &pool_(j, 0), m);
      s += row;
    }
    between_ = 2.0 * s / (double(k) * double(k - 1));
  }

  std::size_t dim() const noexcept { return std::size_t(pool_.cols()); }
  const Matrix& pool() const noexcept { return pool_; }
  double between() const noexcept { return between_; }
  double to_point(const double* z) const {
    return detail::mean_distance_to_pool(z, pool_);
  }

 private:
  Matrix pool_;
  double between_ = 0.0;
};

template <class E>
concept NormExpectations = requires(const E& e, const double* z) {
  { e.dim() } -> std::convertible_to<std::size_t>;
  { e.to_point(z) } -> std::convertible_to<double>;
  { e.between() } -> std::convertible_to<double>;
};

template <NormExpectations E>
double expected_norm_to_std_mvn(std::span<const double> z, const E& exp) {
  if (z.size() != exp.dim())
    throw std::invalid_argument("expected_norm_to_std_mvn: dimension mismatch");
  for (double v : z)
    if (!std::isfinite(v))
      throw std::invalid_argument("expected_norm_to_std_mvn: non-finite input");
  return exp.to_point(z.data());
}

// Merges identical rows (summing their weights) and drops zero weights.
// Exact for the weighted statistic; DP-based samples repeat atoms heavily.
inline std::pair<Matrix, std::vector<double>> compress_atoms(
    const Matrix& atoms, std::span<const double> weights) {
  const auto n = std::size_t(atoms.rows());
  const auto m = atoms.cols();
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (weights[i] > 0.0) order.push_back(i);
  auto less = [&](std::size_t a, std::size_t b) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double x = atoms(Eigen::Index(a), k), y = atoms(Eigen::Index(b), k);
      if (x != y) return x < y;
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  auto same = [&](std::size_t a, std::size_t b) {
    for (Eigen::Index k = 0; k < m; ++k)
      if (atoms(Eigen::Index(a), k) != atoms(Eigen::Index(b), k)) return false;
    return true;
  };
  std::vector<std::size_t> keep;
  std::vector<double> w;
  for (std::size_t idx : order) {
    if (!keep.empty() && same(keep.back(), idx)) {
      w.back() += weights[idx];
    } else {
      keep.push_back(idx);
      w.push_back(weights[idx]);
    }
  }
  Matrix out(Eigen::Index(keep.size()), m);
  for (std::size_t i = 0; i < keep.size(); ++i)
    out.row(Eigen::Index(i)) = atoms.row(Eigen::Index(keep[i]));
  return {std::move(out), std::move(w)};
}

namespace detail {

// 2 sum_i w_i E||z_i - Y|| - sum_{i,j} w_i w_j ||z_i - z_j|| - E||Y - Y'||
// on standardized atoms. The pairwise sum visits i < j once; each row's
// partial sum is reduced in index order.
template <NormExpectations E>
double weighted_energy_kernel(const Matrix& z, std::span<const double> w,
                              const E& exp) {
  const auto n = z.rows();
  const auto m = std::size_t(z.cols());
  double cross = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    cross += w[std::size_t(i)] * exp.to_point(&z(i, 0));
  double pairs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* zi = &z(i, 0);
    double row = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j)
      row += w[std::size_t(j)] * distance(zi, &z(j, 0), m);
    pairs += w[std::size_t(i)] * row;
  }
  return 2.0 * cross - 2.0 * pairs - exp.between();
}

}  // namespace detail

// Dirichlet-weighted energy statistic between sum_i J_i delta_{x_i} and the
// reference law; atoms are standardized before any norm is taken.
template <NormExpectations E>
double weighted_energy_statistic(const Matrix& atoms,
                                 std::span<const double> weights,
                                 const Standardizer& standardizer,
                                 const E& exp) {
  if (std::size_t(atoms.rows()) != weights.size() || atoms.rows() == 0)
    throw std::invalid_argument("weighted_energy_statistic: size mismatch");
  if (std::size_t(atoms.cols()) != exp.dim() ||
      standardizer.dim() != exp.dim())
    throw std::invalid_argument("weighted_energy_statistic: dimension mismatch");
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0))
      throw std::invalid_argument("weighted_energy_statistic: negative weight");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(
        "weighted_energy_statistic: weights must sum to 1");
  auto [unique, w] = compress_atoms(atoms, weights);
  return detail::weighted_energy_kernel(standardizer.apply(unique), w, exp);
}

// One-sample energy statistic (uniform weights 1/n).
template <NormExpectations E>
double energy_statistic(const Matrix& sample, const Standardizer& standardizer,
                        const E& exp) {
  const auto n = std::size_t(sample.rows());
  if (n == 0) throw std::invalid_argument("energy_statistic: empty sample");
  if (std::size_t(sample.cols()) != exp.dim() ||
      standardizer.dim() != exp.dim())
    throw std::invalid_argument("energy_statistic: dimension mismatch");
  const std::vector<double> w(n, 1.0 / double(n));
  return detail::weighted_energy_kernel(standardizer.apply(sample), w, exp);
}

}  // namespace bspgc
