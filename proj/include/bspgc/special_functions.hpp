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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bspgc {

inline double std_normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double std_normal_cdf(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("std_normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace detail {

// Acklam's rational approximation on p <= 0.5, relative error ~1.2e-9.
inline double acklam_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  if (p > 0.5) return -std_normal_quantile(1.0 - p);
  double x = detail::acklam_lower(p);
  // One Newton step against the erfc-based cdf.
  const double pdf = std_normal_pdf(x);
  if (pdf > 0.0) x -= (0.5 * std::erfc(-x / std::numbers::sqrt2) - p) / pdf;
  return x;
}

// log P(shape, x) for the regularized lower incomplete gamma, taking log(x) so
// that arguments far below the smallest double (x ~ e^-5000 at shape 1e-3)
// remain representable.
inline double log_regularized_gamma_p_logx(double shape, double log_x) {
  if (log_x == -std::numeric_limits<double>::infinity())
    return -std::numeric_limits<double>::infinity();
  const double x = std::exp(log_x);
  if (x < shape + 1.0) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
      term *= x / (shape + k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return shape * log_x - x - std::lgamma(shape + 1.0) + std::log(sum);
  }
  // Modified Lentz evaluation of the continued fraction for Q.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - shape;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - shape);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double log_q = -x + shape * log_x - std::lgamma(shape) + std::log(h);
  return std::log(-std::expm1(log_q));
}

inline double regularized_gamma_p(double shape, double x) {
  if (!(shape > 0.0) || x < 0.0)
    throw std::domain_error("regularized_gamma_p: invalid argument");
  if (x == 0.0) return 0.0;
  return std::exp(log_regularized_gamma_p_logx(shape, std::log(x)));
}

// log of the p-quantile of gamma(shape, 1): solves P(shape, x) = p by
// bisection on log x, bracketed from a Wilson-Hilferty / small-shape guess.
inline double log_gamma_quantile(double shape, double p) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::domain_error("gamma_quantile: shape must be positive");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("gamma_quantile: p must lie in (0, 1)");
  const double target = std::log(p);
  auto f = [&](double lx) {
    return log_regularized_gamma_p_logx(shape, lx) - target;
  };

  double guess;
  const double small = (target + std::lgamma(shape + 1.0)) / shape;
  if (shape < 1.0 && small < 0.0) {
    guess = small;  // x^s / Gamma(s + 1) dominates for small x
  } else {
    const double z = std_normal_quantile(p);
    const double t = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
    guess = t > 0.0 ? std::log(shape * t * t * t) : small;
  }

  double lo = guess, hi = guess;
  double step = 1.0;
  if (f(guess) < 0.0) {
    do {
      lo = hi;
      hi += step;
      step *= 2.0;
    } while (f(hi) < 0.0);
  } else {
    do {
      hi = lo;
      lo -= step;
      step *= 2.0;
    } while (f(lo) >= 0.0);
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double gamma_quantile(double shape, double p) {
  return std::exp(log_gamma_quantile(shape, p));
}

}  // namespace bspgc
