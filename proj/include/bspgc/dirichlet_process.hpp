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
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bspgc/rng.hpp"
#include "bspgc/samplers.hpp"
#include "bspgc/special_functions.hpp"

namespace bspgc {

enum class WeightScheme {
  // Normalized G^{-1}_{a/N}(Gamma_i / Gamma_{N+1}), G the gamma(a/N)
  // complement-cdf; weights are nonincreasing in i.
  SeriesQuantile,
  // Dirichlet(a/N, ..., a/N) weights.
  DirichletWeights,
};

// A univariate continuous law used as a DP base measure.
struct UnivariateBase {
  std::function<double(RngStream&)> sample;
  std::function<double(double)> cdf;
};

inline UnivariateBase normal_base(double mean, double sd) {
  return {[mean, sd](RngStream& rng) { return mean + sd * rng.normal(); },
          [mean, sd](double t) { return std_normal_cdf((t - mean) / sd); }};
}

// Weights of a finite DP(concentration, .) approximation with n atoms.
inline std::vector<double> dp_weights(double concentration, std::size_t n,
                                      WeightScheme scheme, RngStream& rng) {
  if (!(concentration > 0.0))
    throw std::invalid_argument("dp_weights: concentration must be > 0");
  if (n == 0) throw std::invalid_argument("dp_weights: n must be >= 1");
  const double shape = concentration / double(n);
  if (scheme == WeightScheme::DirichletWeights)
    return sample_dirichlet_symmetric(shape, n, rng);

  // Gamma_1..Gamma_{N+1}; the tail sums give 1 - Gamma_i / Gamma_{N+1}
  // without cancellation.
  std::vector<double> e(n + 1);
  for (auto& v : e) v = rng.exponential();
  std::vector<double> tail(n + 1);
  double acc = 0.0;
  for (std::size_t i = n + 1; i-- > 0;) {
    tail[i] = acc;  // E_{i+2} + ... + E_{N+1} in 1-based terms
    acc += e[i];
  }
  const double total = acc;
  std::vector<double> log_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    // G^{-1}(p) is the (1 - p) quantile; 1 - Gamma_{i+1}/Gamma_{N+1}.
    const double upper = tail[i] / total;
    log_w[i] = log_gamma_quantile(shape, upper);
  }
  std::vector<double> w;
  if (!normalize_log_weights(log_w, w))
    throw std::runtime_error("dp_weights: series weights are not finite");
  return w;
}

// P_N = sum_i J_i delta_{Y_i}. Immutable; the sorted view used by cdf and
// quantile is built once at construction.
class DPApprox {
 public:
  DPApprox(std::vector<double> atoms, std::vector<double> weights,
           double concentration, WeightScheme scheme)
      : atoms_(std::move(atoms)),
        weights_(std::move(weights)),
        concentration_(concentration),
        scheme_(scheme) {
    if (atoms_.empty() || atoms_.size() != weights_.size())
      throw std::invalid_argument("DPApprox: atoms/weights size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!std::isfinite(atoms_[i]))
        throw std::invalid_argument("DPApprox: non-finite atom");
      if (!(weights_[i] >= 0.0))
        throw std::invalid_argument("DPApprox: negative weight");
      sum += weights_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("DPApprox: weights do not sum to 1");

    std::vector<std::size_t> order(atoms_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return atoms_[a] < atoms_[b];
    });
    sorted_.resize(order.size());
    cumulative_.resize(order.size());
    double c = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      sorted_[k] = atoms_[order[k]];
      c += weights_[order[k]];
      cumulative_[k] = std::min(c, 1.0);  // so cdf values are valid u
    }
    cumulative_.back() = 1.0;
  }

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double concentration() const noexcept { return concentration_; }
  WeightScheme scheme() const noexcept { return scheme_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  // Total weight of atoms <= t.
  double cdf(double t) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return it == sorted_.begin() ? 0.0 : cumulative_[it - sorted_.begin() - 1];
  }

  // inf{ t : cdf(t) >= u }.
  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
      throw std::domain_error("DPApprox::quantile: u must lie in [0, 1]");
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return sorted_[std::min<std::size_t>(it - cumulative_.begin(),
                                         sorted_.size() - 1)];
  }

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  double concentration_;
  WeightScheme scheme_;
  std::vector<double> sorted_;
  std::vector<double> cumulative_;
};

inline double dp_cdf(const DPApprox& dp, double t) { return dp.cdf(t); }
inline double dp_quantile(const DPApprox& dp, double u) {
  return dp.quantile(u);
}

// Finite approximation of DP(a, base) with n atoms.
template <class AtomSampler>
  requires std::invocable<AtomSampler&, RngStream&>
DPApprox dp_approx(double a, AtomSampler&& sample_atom, std::size_t n,
                   WeightScheme scheme, RngStream& rng) {
  if (!(a > 0.0)) throw std::invalid_argument("dp_approx: a must be > 0");
  if (n == 0) throw std::invalid_argument("dp_approx: N must be >= 1");
  std::vector<double> atoms(n);
  for (auto& y : atoms) y = sample_atom(rng);
  auto w = dp_weights(a, n, scheme, rng);
  return DPApprox(std::move(atoms), std::move(w), a, scheme);
}

inline DPApprox dp_approx(double a, const UnivariateBase& base, std::size_t n,
                          WeightScheme scheme, RngStream& rng) {
  return dp_approx(a, base.sample, n, scheme, rng);
}

// H* = a/(a+n) H + n/(a+n) F_n for one coordinate.
struct PosteriorBase {
  PosteriorBase(double a, std::vector<double> data_column, UnivariateBase base)
      : concentration_weight(a / (a + double(data_column.size()))),
        data(std::move(data_column)),
        parametric(std::move(base)) {
    if (!(a > 0.0))
      throw std::invalid_argument("PosteriorBase: a must be > 0");
  }

  double concentration_weight;
  std::vector<double> data;
  UnivariateBase parametric;

  double cdf(double t) const {
    const double n = double(data.size());
    const double below = double(std::count_if(
        data.begin(), data.end(), [t](double x) { return x <= t; }));
    const double emp = data.empty() ? 0.0 : below / n;
    return concentration_weight * parametric.cdf(t) +
           (1.0 - concentration_weight) * emp;
  }
};

inline double sample_posterior_base(const PosteriorBase& pb, RngStream& rng) {
  if (pb.data.empty())
    throw std::invalid_argument("sample_posterior_base: empty data column");
  if (rng.bernoulli(pb.concentration_weight)) return pb.parametric.sample(rng);
  return pb.data[rng.index(pb.data.size())];
}

// Posterior DP(a + n, H*) approximation; n = 0 reduces to the prior.
inline DPApprox posterior_dp(double a, const PosteriorBase& pb, std::size_t n,
                             WeightScheme scheme, RngStream& rng) {
  if (pb.data.empty()) return dp_approx(a, pb.parametric, n, scheme, rng);
  return dp_approx(
      a + double(pb.data.size()),
      [&pb](RngStream& r) { return sample_posterior_base(pb, r); }, n, scheme,
      rng);
}

}  // namespace bspgc
