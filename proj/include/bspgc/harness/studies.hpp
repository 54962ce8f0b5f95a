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

#include <chrono>
#include <cstddef>
#include <vector>

#include "bspgc/energy.hpp"
#include "bspgc/harness/alternatives.hpp"
#include "bspgc/mvn_test.hpp"

// Study helpers outside the public test API: distances to a known truth and
// runs with a user-chosen base measure H.
namespace bspgc::harness {

// Reference for N_m(mean, cov), with the same expectation method as cfg.
inline DistanceReference normal_reference(const Vector& mean, const Matrix& cov,
                                          const TestConfig& cfg,
                                          RngStream& pool_rng) {
  Standardizer s(mean, cholesky(cov));
  if (cfg.expectation_method == ExpectationMethod::Series)
    return {std::move(s), StdMvnExpectations::series(std::size_t(mean.size()))};
  return {std::move(s), StdMvnExpectations::monte_carlo(
                            std::size_t(mean.size()), cfg.pool_size, pool_rng)};
}

// Reference for the law of `spec`, standardized by `standardizer`. The
// normal laws use closed forms; the rest a frozen pool of cfg.pool_size draws.
inline DistanceReference truth_reference(const AlternativeSpec& spec,
                                         const Standardizer& standardizer,
                                         const TestConfig& cfg,
                                         RngStream& pool_rng) {
  if (spec.name == Alternative::N2I || spec.name == Alternative::N2A2)
    return normal_reference(Vector::Zero(2), alternative_covariance(spec), cfg,
                            pool_rng);
  return make_empirical_reference(
      generate_alternative(spec, cfg.pool_size, pool_rng), standardizer);
}

// Reference for a base measure H with known mean and covariance.
inline DistanceReference base_reference(const BaseMeasure& h, const Vector& mean,
                                        const Matrix& cov, bool normal,
                                        const TestConfig& cfg,
                                        RngStream& pool_rng) {
  if (normal) return normal_reference(mean, cov, cfg, pool_rng);
  Matrix draws(static_cast<Eigen::Index>(cfg.pool_size),
               static_cast<Eigen::Index>(h.dim));
  for (Eigen::Index i = 0; i < draws.rows(); ++i) h.joint(pool_rng, &draws(i, 0));
  return make_empirical_reference(draws, Standardizer(mean, cholesky(cov)));
}

// r posterior-model distances to the true law of the data (H = fitted null).
inline std::vector<double> posterior_distances_to_truth(
    const Matrix& data, const AlternativeSpec& truth, const TestConfig& cfg) {
  validate_config(cfg, std::size_t(data.rows()));
  const NullModel null = fit_null(data);
  RngStream pool_rng(cfg.seed, kPoolStream);
  const DistanceReference ref =
      truth_reference(truth, null.standardizer(), cfg, pool_rng);
  const BaseMeasure base = normal_base_measure(null);
  std::vector<double> d(cfg.r);
  parallel_for_index(cfg.r, cfg.threads, [&](std::size_t j) {
    RngStream rng(cfg.seed, cfg.r + j);
    d[j] = posterior_distance_draw(data, base, ref, cfg, rng);
  });
  return d;
}

// r prior-model distances d(F_N, H) for an arbitrary base measure.
inline std::vector<double> prior_distances(const BaseMeasure& base,
                                           const DistanceReference& ref,
                                           const TestConfig& cfg) {
  std::vector<double> d(cfg.r);
  parallel_for_index(cfg.r, cfg.threads, [&](std::size_t j) {
    RngStream rng(cfg.seed, j);
    d[j] = prior_distance_draw(base, ref, cfg, rng);
  });
  return d;
}

// The test with H replaced by `base`. Prior distances are measured against
// H itself, posterior distances against the fitted null.
inline TestReport run_test_with_base(const Matrix& data, const TestConfig& cfg,
                                     const BaseMeasure& base,
                                     const DistanceReference& prior_ref) {
  const auto start = std::chrono::steady_clock::now();
  auto warnings = validate_config(cfg, std::size_t(data.rows()));
  warnings.push_back("base measure overridden; results are not a valid test");
  const NullModel null = fit_null(data);
  RngStream pool_rng(cfg.seed, kPoolStream);
  const DistanceReference post_ref = make_null_reference(null, cfg, pool_rng);
  TestReport rep = make_report(
      data, cfg, draw_distances(data, base, prior_ref, post_ref, cfg),
      std::move(warnings));
  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

}  // namespace bspgc::harness
