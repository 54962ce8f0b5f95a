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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bspgc/errors.hpp"
#include "bspgc/harness/alternatives.hpp"
#include "bspgc/harness/studies.hpp"
#include "bspgc/mvn_test.hpp"

namespace {

using bspgc::Matrix;
using bspgc::RngStream;
using bspgc::TestConfig;
using bspgc::Vector;

TestConfig small_config() {
  TestConfig cfg;
  cfg.N = 200;
  cfg.r = 100;
  cfg.pool_size = 1000;
  cfg.seed = 11;
  return cfg;
}

Matrix normal_data(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return bspgc::harness::generate_alternative({bspgc::harness::Alternative::N2I},
                                              n, rng);
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(double(i) / double(a.size()) -
                             double(j) / double(b.size())));
  }
  return d;
}

bspgc::DistanceDraws draws_for(const Matrix& data, const TestConfig& cfg) {
  const auto null = bspgc::fit_null(data);
  RngStream pool(cfg.seed, bspgc::kPoolStream);
  const auto ref = bspgc::make_null_reference(null, cfg, pool);
  return bspgc::draw_distances(data, bspgc::normal_base_measure(null), ref, cfg);
}

TEST(FitNull, SingularCovariance) {
  Matrix x(2, 2);
  x << 0, 0, 2, 2;
  EXPECT_THROW(bspgc::fit_null(x), bspgc::InsufficientData);
  Matrix y(3, 2);
  y << 0, 0, 1, 1, 2, 2;
  EXPECT_THROW(bspgc::fit_null(y), bspgc::NotPositiveDefinite);
}

TEST(FitNull, UnitSquare) {
  Matrix x(4, 2);
  x << 0, 0, 1, 0, 0, 1, 1, 1;
  const auto null = bspgc::fit_null(x);
  EXPECT_DOUBLE_EQ(null.mean[0], 0.5);
  EXPECT_DOUBLE_EQ(null.mean[1], 0.5);
  EXPECT_NEAR(null.covariance(0, 0), 1.0 / 3, 1e-15);
  EXPECT_NEAR(null.covariance(1, 1), 1.0 / 3, 1e-15);
  EXPECT_NEAR(null.covariance(0, 1), 0.0, 1e-15);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(null.marginal_variance[i], null.covariance(Eigen::Index(i), Eigen::Index(i)));
    EXPECT_EQ(null.marginal_mean[i], null.mean[Eigen::Index(i)]);
  }
  EXPECT_TRUE(null.copula_correlation.isIdentity(1e-14));
}

TEST(FitNull, TooFewRows) {
  EXPECT_THROW(bspgc::fit_null(Matrix::Zero(2, 2)), bspgc::InsufficientData);
  EXPECT_THROW(bspgc::fit_null(Matrix::Zero(5, 0)), bspgc::InsufficientData);
}

TEST(ValidateConfig, Rules) {
  TestConfig cfg;
  EXPECT_TRUE(bspgc::validate_config(cfg, 50).empty());
  cfg.a = 30;
  EXPECT_EQ(bspgc::validate_config(cfg, 50).size(), 1u);
  cfg.a = 51;
  EXPECT_THROW(bspgc::validate_config(cfg, 50), bspgc::InvalidConfig);
  cfg.a = 0;
  EXPECT_THROW(bspgc::validate_config(cfg, 50), bspgc::InvalidConfig);
  cfg = TestConfig{};
  cfg.M = 1;
  EXPECT_THROW(bspgc::validate_config(cfg, 50), bspgc::InvalidConfig);
  cfg = TestConfig{};
  cfg.i0 = 20;
  EXPECT_THROW(bspgc::validate_config(cfg, 50), bspgc::InvalidConfig);
  cfg = TestConfig{};
  cfg.r = 10;
  EXPECT_THROW(bspgc::validate_config(cfg, 50), bspgc::InvalidConfig);
  cfg = TestConfig{};
  cfg.N = 0;
  EXPECT_THROW(bspgc::validate_config(cfg, 50), bspgc::InvalidConfig);
}

TEST(RunTest, RejectsAExceedingN) {
  TestConfig cfg = small_config();
  cfg.a = 100;
  EXPECT_THROW(bspgc::run_test(normal_data(50, 1), cfg), bspgc::InvalidConfig);
}

TEST(RunTest, DeterministicGivenSeed) {
  const Matrix x = normal_data(40, 2);
  TestConfig cfg = small_config();
  auto a = bspgc::run_test(x, cfg);
  auto b = bspgc::run_test(x, cfg);
  a.wall_clock_seconds = b.wall_clock_seconds = 0;
  EXPECT_EQ(a, b);
  cfg.threads = 4;
  auto c = bspgc::run_test(x, cfg);
  c.wall_clock_seconds = 0;
  c.config.threads = 1;
  EXPECT_EQ(a, c);
  cfg.threads = 1;
  cfg.seed = 12;
  auto d = bspgc::run_test(x, cfg);
  EXPECT_NE(a.prior_summary, d.prior_summary);
}

TEST(RunTest, ReportFields) {
  const auto rep = bspgc::run_test(normal_data(40, 3), small_config());
  EXPECT_EQ(rep.n, 40u);
  EXPECT_EQ(rep.m, 2u);
  EXPECT_EQ(rep.bin_edges.size(), 21u);
  EXPECT_EQ(rep.per_bin_rb.size(), 20u);
  EXPECT_GE(rep.strength, 0.0);
  EXPECT_LE(rep.strength, 1.0);
  EXPECT_EQ(rep.verdict, bspgc::verdict(rep.rb));
  EXPECT_LE(rep.prior_summary.min, rep.prior_summary.q05);
  EXPECT_LE(rep.prior_summary.q95, rep.prior_summary.max);
  EXPECT_GT(rep.wall_clock_seconds, 0.0);
}

TEST(RunTest, SeriesAndRawPathsRun) {
  TestConfig cfg = small_config();
  cfg.expectation_method = bspgc::ExpectationMethod::Series;
  cfg.weight_scheme = bspgc::WeightScheme::SeriesQuantile;
  cfg.corr_method = bspgc::CorrelationMethod::SpearmanRho;
  const auto a = bspgc::run_test(normal_data(40, 4), cfg);
  EXPECT_EQ(a.clamped_prior, 0u);
  cfg.whiten = false;
  cfg.corr_method = bspgc::CorrelationMethod::GaussianRank;
  cfg.exact_null_correlation = true;
  const auto b = bspgc::run_test(normal_data(40, 4), cfg);
  EXPECT_GT(b.prior_summary.mean, 0.0);
}

TEST(PriorDistance, CollapsesForLargeConcentration) {
  const auto null = bspgc::fit_null(normal_data(50, 5));
  TestConfig cfg = small_config();
  cfg.expectation_method = bspgc::ExpectationMethod::Series;
  RngStream pool(0, bspgc::kPoolStream);
  const auto ref = bspgc::make_null_reference(null, cfg, pool);
  auto mean_at = [&](double a) {
    cfg.a = a;
    std::vector<double> d(50);
    for (std::size_t j = 0; j < d.size(); ++j) {
      RngStream rng(3, j);
      d[j] = bspgc::prior_distance_draw(null, ref, cfg, rng);
    }
    return mean(d);
  };
  const double m1 = mean_at(1), m100 = mean_at(100), m1e6 = mean_at(1e6);
  EXPECT_GT(m1, m100);
  EXPECT_GT(m100, m1e6);
  EXPECT_LT(m1e6, 0.05 * m1);
}

TEST(PosteriorDistance, ShrinksAsSampleGrows) {
  TestConfig cfg = small_config();
  cfg.r = 40;
  cfg.expectation_method = bspgc::ExpectationMethod::Series;
  const double small = mean(draws_for(normal_data(50, 6), cfg).posterior);
  const double large = mean(draws_for(normal_data(500, 6), cfg).posterior);
  EXPECT_LT(large, small);
}

TEST(Pipeline, DiagonalAffineMapLeavesDrawsUnchanged) {
  const Matrix x = normal_data(60, 7);
  Matrix y = x;
  y.col(0) = 3.0 * x.col(0).array() + 5.0;
  y.col(1) = 0.25 * x.col(1).array() - 2.0;
  const TestConfig cfg = small_config();
  const auto a = draws_for(x, cfg);
  const auto b = draws_for(y, cfg);
  for (std::size_t j = 0; j < cfg.r; ++j) {
    EXPECT_NEAR(a.prior[j], b.prior[j], 1e-9 * (1 + a.prior[j]));
    EXPECT_NEAR(a.posterior[j], b.posterior[j], 1e-9 * (1 + a.posterior[j]));
  }
}

TEST(Pipeline, GeneralAffineMapPreservesPriorLaw) {
  const Matrix x = normal_data(60, 8);
  Matrix a(2, 2);
  a << 1.0, 2.0, -0.5, 1.5;
  const Matrix y = (x * a.transpose()).rowwise() + Eigen::RowVector2d(1, -4);
  TestConfig cfg = small_config();
  cfg.r = 200;
  const auto dx = draws_for(x, cfg);
  cfg.seed = 99;
  const auto dy = draws_for(y, cfg);
  // 1% critical value of the two-sample KS statistic.
  const double crit = 1.63 * std::sqrt(2.0 / double(cfg.r));
  EXPECT_LT(ks_statistic(dx.prior, dy.prior), crit);
}

TEST(Pipeline, PriorDataConflictInflatesEvidence) {
  // Cautionary: H shifted by 3 from the fitted null makes the prior
  // distances large, so the posterior looks compatible with normality.
  RngStream rng(9, 0);
  const Matrix x = bspgc::harness::generate_alternative(
      {bspgc::harness::Alternative::ExpExp}, 50, rng);
  const TestConfig cfg = small_config();
  const auto honest = bspgc::run_test(x, cfg);
  const auto null = bspgc::fit_null(x);
  const Vector shifted = null.mean.array() + 3.0;
  const auto h = bspgc::normal_base_measure(shifted, null.covariance);
  RngStream pool(cfg.seed, bspgc::kPoolStream);
  const auto prior_ref = bspgc::make_null_reference(null, cfg, pool);
  const auto misuse = bspgc::harness::run_test_with_base(x, cfg, h, prior_ref);
  EXPECT_GT(misuse.prior_summary.mean, honest.prior_summary.mean);
  EXPECT_GE(misuse.rb, honest.rb);
  EXPECT_EQ(misuse.verdict, bspgc::Verdict::EvidenceFor);
  EXPECT_FALSE(misuse.warnings.empty());
}

TEST(Summarize, TypeOneQuantiles) {
  std::vector<double> v(20);
  for (std::size_t i = 0; i < 20; ++i) v[i] = double(20 - i);
  const auto s = bspgc::summarize(v);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.q05, 1.0);
  EXPECT_EQ(s.q25, 5.0);
  EXPECT_EQ(s.median, 10.0);
  EXPECT_EQ(s.q95, 19.0);
  EXPECT_EQ(s.max, 20.0);
  EXPECT_DOUBLE_EQ(s.mean, 10.5);
}

TEST(ParallelFor, RethrowsAndCoversAll) {
  std::vector<int> hit(101, 0);
  bspgc::parallel_for_index(101, 3, [&](std::size_t i) { ++hit[i]; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(bspgc::parallel_for_index(10, 2,
                                         [](std::size_t i) {
                                           if (i == 7) throw std::runtime_error("x");
                                         }),
               std::runtime_error);
}

}  // namespace
