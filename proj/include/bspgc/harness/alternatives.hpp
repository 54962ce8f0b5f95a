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

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bspgc/linalg.hpp"
#include "bspgc/mvn_test.hpp"
#include "bspgc/rng.hpp"
#include "bspgc/samplers.hpp"

namespace bspgc::harness {

enum class Alternative {
  N2I,          // N2(0, I2)
  N2A2,         // N2(0, A2)
  LN2B2,        // exp of N2(0, B2)
  T5I2,         // bivariate t_5, scale I2
  ExpExp,       // E(0.5) x E(0.25)
  ExpSq,        // E(0.5) x E(0.5)
  BetaBeta,     // B(1,2) x B(2,1)
  PVIIr,        // (1 + t_r) x (1 + t_r)
  NMix1,        // 0.9 N2(0, I2) + 0.1 N2(3, I2)
  NMix2,        // 0.9 N2(0, A2) + 0.1 N2(0, I2)
  SphericalLN,  // uniform direction, LN(0, 0.25) radius
  ChiSq5Sq,     // chi2_5 x chi2_5
  NChiSq5,      // N(0,1) x chi2_5
  NT3,          // N(0,1) x t_3
};

struct AlternativeSpec {
  Alternative name = Alternative::N2I;
  double param = 10.0;  // degrees of freedom for PVIIr; unused otherwise

  bool operator==(const AlternativeSpec&) const = default;
};

inline constexpr double kA2Offdiag = 0.2;
// The off-diagonal 0.2 with unit-quarter variances; the (2,2) entry is read
// as 0.25 since 0.025 gives an indefinite matrix.
inline Matrix b2_matrix() {
  Matrix b(2, 2);
  b << 0.25, 0.2, 0.2, 0.25;
  return b;
}
inline Matrix a2_matrix() {
  Matrix a(2, 2);
  a << 1.0, kA2Offdiag, kA2Offdiag, 1.0;
  return a;
}

struct AlternativeName {
  Alternative id;
  std::string_view key;
};

inline constexpr std::array<AlternativeName, 14> kAlternativeNames{{
    {Alternative::N2I, "n2-i"},
    {Alternative::N2A2, "n2-a2"},
    {Alternative::LN2B2, "ln2-b2"},
    {Alternative::T5I2, "t5-i2"},
    {Alternative::ExpExp, "exp-exp"},
    {Alternative::ExpSq, "exp-sq"},
    {Alternative::BetaBeta, "beta-beta"},
    {Alternative::PVIIr, "pvii-r"},
    {Alternative::NMix1, "nmix1"},
    {Alternative::NMix2, "nmix2"},
    {Alternative::SphericalLN, "spherical-ln"},
    {Alternative::ChiSq5Sq, "chisq5-sq"},
    {Alternative::NChiSq5, "n-chisq5"},
    {Alternative::NT3, "n-t3"},
}};

inline std::string to_string(Alternative a) {
  for (const auto& n : kAlternativeNames)
    if (n.id == a) return std::string(n.key);
  throw std::invalid_argument("unknown alternative");
}

inline std::string to_string(const AlternativeSpec& s) {
  if (s.name == Alternative::PVIIr) {
    const double r = s.param;
    std::string p = r == std::floor(r) ? std::to_string(static_cast<long long>(r))
                                       : std::to_string(r);
    return "pvii-" + p;
  }
  return to_string(s.name);
}

// Accepts the keys above; "pvii-<r>" sets the degrees of freedom.
inline AlternativeSpec parse_alternative(std::string_view key) {
  for (const auto& n : kAlternativeNames)
    if (n.key == key) return {n.id, 10.0};
  constexpr std::string_view pvii = "pvii-";
  if (key.substr(0, pvii.size()) == pvii) {
    const std::string rest(key.substr(pvii.size()));
    std::size_t used = 0;
    double r = 0;
    try {
      r = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && used > 0 && r > 0 && std::isfinite(r))
      return {Alternative::PVIIr, r};
  }
  throw std::invalid_argument("unknown distribution '" + std::string(key) +
                              "'");
}

inline constexpr std::size_t alternative_dim(const AlternativeSpec&) {
  return 2;
}

namespace detail {

inline void bivariate_normal(const Matrix& chol, double shift, RngStream& rng,
                             double* out) {
  const double z0 = rng.normal();
  const double z1 = rng.normal();
  out[0] = shift + chol(0, 0) * z0;
  out[1] = shift + chol(1, 0) * z0 + chol(1, 1) * z1;
}

inline double beta(double a, double b, RngStream& rng) {
  const double lx = rng.log_gamma(a);
  const double ly = rng.log_gamma(b);
  const double mx = std::max(lx, ly);
  return std::exp(lx - mx) / (std::exp(lx - mx) + std::exp(ly - mx));
}

}  // namespace detail

// One i.i.d. row from the named law.
inline void sample_alternative_row(const AlternativeSpec& spec, RngStream& rng,
                                   double* out) {
  static const Matrix l_i = Matrix::Identity(2, 2);
  static const Matrix l_a2 = cholesky(a2_matrix());
  static const Matrix l_b2 = cholesky(b2_matrix());
  switch (spec.name) {
    case Alternative::N2I:
      detail::bivariate_normal(l_i, 0.0, rng, out);
      return;
    case Alternative::N2A2:
      detail::bivariate_normal(l_a2, 0.0, rng, out);
      return;
    case Alternative::LN2B2:
      detail::bivariate_normal(l_b2, 0.0, rng, out);
      out[0] = std::exp(out[0]);
      out[1] = std::exp(out[1]);
      return;
    case Alternative::T5I2: {
      const double s = std::sqrt(rng.chi_squared(5.0) / 5.0);
      out[0] = rng.normal() / s;
      out[1] = rng.normal() / s;
      return;
    }
    case Alternative::ExpExp:
      out[0] = rng.exponential() / 0.5;
      out[1] = rng.exponential() / 0.25;
      return;
    case Alternative::ExpSq:
      out[0] = rng.exponential() / 0.5;
      out[1] = rng.exponential() / 0.5;
      return;
    case Alternative::BetaBeta:
      out[0] = detail::beta(1.0, 2.0, rng);
      out[1] = detail::beta(2.0, 1.0, rng);
      return;
    case Alternative::PVIIr:
      out[0] = 1.0 + rng.student_t(spec.param);
      out[1] = 1.0 + rng.student_t(spec.param);
      return;
    case Alternative::NMix1:
      detail::bivariate_normal(l_i, rng.bernoulli(0.1) ? 3.0 : 0.0, rng, out);
      return;
    case Alternative::NMix2:
      detail::bivariate_normal(rng.bernoulli(0.1) ? l_i : l_a2, 0.0, rng, out);
      return;
    case Alternative::SphericalLN: {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      const double radius = std::exp(0.25 * rng.normal());
      out[0] = radius * std::cos(theta);
      out[1] = radius * std::sin(theta);
      return;
    }
    case Alternative::ChiSq5Sq:
      out[0] = rng.chi_squared(5.0);
      out[1] = rng.chi_squared(5.0);
      return;
    case Alternative::NChiSq5:
      out[0] = rng.normal();
      out[1] = rng.chi_squared(5.0);
      return;
    case Alternative::NT3:
      out[0] = rng.normal();
      out[1] = rng.student_t(3.0);
      return;
  }
  throw std::invalid_argument("unknown alternative");
}

inline Matrix generate_alternative(const AlternativeSpec& spec, std::size_t n,
                                   RngStream& rng) {
  Matrix x(static_cast<Eigen::Index>(n),
           static_cast<Eigen::Index>(alternative_dim(spec)));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    sample_alternative_row(spec, rng, &x(i, 0));
  return x;
}

// An alternative used as the DP base measure H (deliberate misuse runs).
// Only laws with normal marginals are supported.
inline BaseMeasure alternative_base_measure(const AlternativeSpec& spec) {
  switch (spec.name) {
    case Alternative::N2I:
      return normal_base_measure(Vector::Zero(2), Matrix::Identity(2, 2));
    case Alternative::N2A2:
      return normal_base_measure(Vector::Zero(2), a2_matrix());
    case Alternative::NMix2: {
      // Both components have N(0,1) margins.
      BaseMeasure h;
      h.dim = 2;
      h.joint = [spec](RngStream& rng, double* out) {
        sample_alternative_row(spec, rng, out);
      };
      h.marginals = {normal_base(0.0, 1.0), normal_base(0.0, 1.0)};
      h.exact_correlation = covariance_to_correlation(
          0.9 * a2_matrix() + 0.1 * Matrix::Identity(2, 2));
      return h;
    }
    default:
      throw std::invalid_argument("no base measure for '" + to_string(spec) +
                                  "'");
  }
}

// Exact covariance of the N2I, N2A2 and NMix2 laws.
inline Matrix alternative_covariance(const AlternativeSpec& spec) {
  switch (spec.name) {
    case Alternative::N2I:
      return Matrix::Identity(2, 2);
    case Alternative::N2A2:
      return a2_matrix();
    case Alternative::NMix2:
      return 0.9 * a2_matrix() + 0.1 * Matrix::Identity(2, 2);
    default:
      throw std::invalid_argument("no closed-form covariance for '" +
                                  to_string(spec) + "'");
  }
}

}  // namespace bspgc::harness
