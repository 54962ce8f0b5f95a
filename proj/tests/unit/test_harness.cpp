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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bspgc/errors.hpp"
#include "bspgc/harness/alternatives.hpp"
#include "bspgc/harness/cli.hpp"
#include "bspgc/harness/csv.hpp"
#include "bspgc/harness/power_study.hpp"
#include "bspgc/harness/report_json.hpp"

namespace {

namespace h = bspgc::harness;
using bspgc::Matrix;
using bspgc::RngStream;
using h::Alternative;

struct Moments {
  double mean, var;
  bool check_var = true;
};

struct GeneratorCase {
  Alternative name;
  Moments x, y;
  double cov = NAN;  // NAN: not checked
};

// Exact moments of each law.
std::vector<GeneratorCase> generator_cases() {
  const double ln_mean = std::exp(0.125);
  const double ln_var = (std::exp(0.25) - 1) * std::exp(0.25);
  const double sph_var = std::exp(0.125) / 2;
  return {
      {Alternative::N2I, {0, 1}, {0, 1}, 0},
      {Alternative::N2A2, {0, 1}, {0, 1}, 0.2},
      {Alternative::LN2B2, {ln_mean, ln_var}, {ln_mean, ln_var}, NAN},
      {Alternative::T5I2, {0, 5.0 / 3}, {0, 5.0 / 3}, 0},
      {Alternative::ExpExp, {2, 4}, {4, 16}, 0},
      {Alternative::ExpSq, {2, 4}, {2, 4}, 0},
      {Alternative::BetaBeta, {1.0 / 3, 1.0 / 18}, {2.0 / 3, 1.0 / 18}, 0},
      {Alternative::PVIIr, {1, 1.25}, {1, 1.25}, 0},
      {Alternative::NMix1, {0.3, 1.81}, {0.3, 1.81}, 0.81},
      {Alternative::NMix2, {0, 1}, {0, 1}, 0.18},
      {Alternative::SphericalLN, {0, sph_var}, {0, sph_var}, 0},
      {Alternative::ChiSq5Sq, {5, 10}, {5, 10}, 0},
      {Alternative::NChiSq5, {0, 1}, {5, 10}, 0},
      {Alternative::NT3, {0, 1}, {0, 3, false}, NAN},
  };
}

void check_column(const Eigen::VectorXd& v, const Moments& m,
                  const std::string& label) {
  const double n = double(v.size());
  const double mean = v.mean();
  const Eigen::ArrayXd c = v.array() - mean;
  const double var = (c * c).sum() / (n - 1);
  const double m4 = (c * c * c * c).mean();
  EXPECT_NEAR(mean, m.mean, 3 * std::sqrt(m.var / n)) << label << " mean";
  if (m.check_var)
    EXPECT_NEAR(var, m.var, 3 * std::sqrt((m4 - var * var) / n))
        << label << " variance";
}

TEST(Alternatives, MomentSuite) {
  const std::size_t n = 100000;
  for (const auto& c : generator_cases()) {
    RngStream rng(2024, std::uint64_t(c.name));
    const Matrix x = h::generate_alternative({c.name}, n, rng);
    const std::string label = h::to_string(c.name);
    check_column(x.col(0), c.x, label + " x");
    check_column(x.col(1), c.y, label + " y");
    if (!std::isnan(c.cov)) {
      const Eigen::ArrayXd a = x.col(0).array() - x.col(0).mean();
      const Eigen::ArrayXd b = x.col(1).array() - x.col(1).mean();
      const double cov = (a * b).sum() / double(n - 1);
      const double se = std::sqrt(((a * b - cov) * (a * b - cov)).mean() / double(n));
      EXPECT_NEAR(cov, c.cov, 3 * se) << label << " covariance";
    }
  }
}

TEST(Alternatives, NMix1ComponentFraction) {
  // E(x + y) = 6p for the shifted-component weight p.
  const std::size_t n = 100000;
  RngStream rng(7, 0);
  const Matrix x = h::generate_alternative({Alternative::NMix1}, n, rng);
  const Eigen::ArrayXd s = (x.col(0) + x.col(1)).array();
  const double p = s.mean() / 6;
  const double se = std::sqrt((s - s.mean()).square().mean() / double(n)) / 6;
  EXPECT_NEAR(p, 0.10, 3 * se);
}

TEST(Alternatives, T5HeavierTailsThanNormal) {
  const std::size_t n = 100000;
  RngStream rng(8, 0);
  const Matrix x = h::generate_alternative({Alternative::T5I2}, n, rng);
  for (int j = 0; j < 2; ++j) {
    const Eigen::ArrayXd c = x.col(j).array() - x.col(j).mean();
    const double k = (c.pow(4)).mean() / std::pow(c.square().mean(), 2);
    // Normal kurtosis 3 has sampling SE sqrt(24 / n).
    EXPECT_GT(k, 3 + 3 * std::sqrt(24.0 / double(n)));
  }
  const double rho = (x.col(0).array() * x.col(1).array()).mean() /
                     std::sqrt(x.col(0).squaredNorm() * x.col(1).squaredNorm() /
                               double(n * n));
  EXPECT_NEAR(rho, 0.0, 3 / std::sqrt(double(n)));
}

TEST(Alternatives, ProductLawsHaveIndependentCoordinates) {
  RngStream rng(9, 0);
  const Matrix x = h::generate_alternative({Alternative::ExpExp}, 50000, rng);
  const double tau = bspgc::kendall_tau(
      std::vector<double>(x.col(0).begin(), x.col(0).end()),
      std::vector<double>(x.col(1).begin(), x.col(1).end()));
  // Var(tau) = 2(2n+5) / (9n(n-1)) under independence.
  EXPECT_NEAR(tau, 0.0, 3 * std::sqrt(2.0 * 100005 / (9.0 * 50000 * 49999)));
}

TEST(Alternatives, SphericalRadiusIsLognormal) {
  RngStream rng(10, 0);
  const Matrix x = h::generate_alternative({Alternative::SphericalLN}, 100000, rng);
  const Eigen::ArrayXd log_r = x.rowwise().norm().array().log();
  EXPECT_NEAR(log_r.mean(), 0.0, 3 * 0.25 / std::sqrt(1e5));
  const double sd = std::sqrt((log_r - log_r.mean()).square().mean());
  EXPECT_NEAR(sd, 0.25, 3 * 0.25 / std::sqrt(2e5));
}

TEST(Alternatives, NamesRoundTrip) {
  for (const auto& entry : h::kAlternativeNames) {
    const auto spec = h::parse_alternative(entry.key);
    EXPECT_EQ(spec.name, entry.id);
    EXPECT_EQ(h::parse_alternative(h::to_string(spec)).name, entry.id);
  }
  const auto p = h::parse_alternative("pvii-4");
  EXPECT_EQ(p.name, Alternative::PVIIr);
  EXPECT_EQ(p.param, 4.0);
  EXPECT_EQ(h::to_string(p), "pvii-4");
  EXPECT_THROW(h::parse_alternative("cauchy"), std::invalid_argument);
  EXPECT_THROW(h::parse_alternative("pvii-x"), std::invalid_argument);
  EXPECT_THROW(h::alternative_base_measure({Alternative::ExpExp}),
               std::invalid_argument);
}

TEST(Csv, Examples) {
  const Matrix a = h::parse_csv("0,0\n1,1\n");
  ASSERT_EQ(a.rows(), 2);
  ASSERT_EQ(a.cols(), 2);
  EXPECT_EQ(a(1, 0), 1.0);
  const Matrix b = h::parse_csv("x,y\n1.5,-2e3\n\n 3 , 4\r\n");
  ASSERT_EQ(b.rows(), 2);
  EXPECT_EQ(b(0, 1), -2000.0);
  EXPECT_EQ(b(1, 0), 3.0);
}

TEST(Csv, Errors) {
  try {
    h::parse_csv("1,2\n3\n");
    FAIL();
  } catch (const bspgc::ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  try {
    h::parse_csv("a,b\n1,2\n3,zz\n");
    FAIL();
  } catch (const bspgc::ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 2u);
  }
  EXPECT_THROW(h::parse_csv(""), bspgc::ParseError);
  EXPECT_THROW(h::parse_csv("x,y\n"), bspgc::ParseError);
  EXPECT_THROW(h::parse_csv("1,nan\n"), bspgc::ParseError);
  EXPECT_THROW(h::load_csv("/nonexistent/file.csv"), std::runtime_error);
}

bspgc::TestConfig quick_config() {
  bspgc::TestConfig cfg;
  cfg.N = 100;
  cfg.r = 40;
  cfg.pool_size = 500;
  cfg.seed = 3;
  return cfg;
}

TEST(ReportJson, RoundTrip) {
  auto rep = h::simulate({Alternative::LN2B2}, 30, quick_config());
  rep.warnings.push_back("note, with \"quotes\"");
  const auto back = bspgc::parse_report(bspgc::serialize_report(rep));
  EXPECT_EQ(back, rep);
  const auto j = nlohmann::json::parse(bspgc::serialize_report(rep));
  EXPECT_EQ(j.at("schema_version"), bspgc::kReportSchemaVersion);
  for (const char* key : {"rb", "strength", "verdict", "config",
                          "prior_summary", "posterior_summary", "warnings"})
    EXPECT_TRUE(j.contains(key)) << key;
  auto bad = j;
  bad["schema_version"] = 99;
  EXPECT_THROW(bspgc::parse_report(bad.dump()), std::invalid_argument);
}

TEST(PowerStudy, Basics) {
  const auto one = h::power_study({Alternative::N2I}, 30, 1, quick_config());
  EXPECT_TRUE(one.por == 0.0 || one.por == 1.0);
  EXPECT_THROW(h::power_study({Alternative::N2I}, 30, 0, quick_config()),
               std::invalid_argument);
  auto cfg = quick_config();
  const auto a = h::power_study({Alternative::ExpExp}, 30, 4, cfg);
  cfg.threads = 3;
  auto b = h::power_study({Alternative::ExpExp}, 30, 4, cfg);
  b.config.threads = 1;
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(a.por, double(a.rejections) / 4.0);
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = h::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("bspgc_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    std::filesystem::create_directories(dir_);
    RngStream rng(5, 0);
    const Matrix x = h::generate_alternative({Alternative::N2I}, 30, rng);
    std::ofstream f(path("good.csv"));
    f << "x,y\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i) f << x(i, 0) << "," << x(i, 1) << "\n";
    std::ofstream(path("ragged.csv")) << "1,2\n3\n";
    std::ofstream(path("tiny.csv")) << "1,2\n3,4\n";
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

const std::vector<std::string> kQuick{"--N", "100", "--r", "40", "--pool", "500"};

std::vector<std::string> with_quick(std::vector<std::string> args) {
  args.insert(args.end(), kQuick.begin(), kQuick.end());
  return args;
}

TEST_F(CliTest, TestSubcommandJson) {
  const auto r = run_cli(with_quick(
      {"test", path("good.csv"), "--a", "1", "--seed", "42", "--format", "json"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = bspgc::parse_report(r.out);
  EXPECT_EQ(rep.n, 30u);
  EXPECT_EQ(rep.config.seed, 42u);
  EXPECT_EQ(rep.config.pool_size, 500u);
}

TEST_F(CliTest, TextFormat) {
  const auto r = run_cli(with_quick({"test", path("good.csv")}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verdict:"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({"test", path("good.csv"), "--bogus"}).code, h::kExitUsage);
  EXPECT_EQ(run_cli({}).code, h::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, h::kExitOk);
  EXPECT_EQ(run_cli({"test", path("good.csv"), "--corr", "pearson"}).code,
            h::kExitUsage);
  EXPECT_EQ(run_cli(with_quick({"test", path("good.csv"), "--a", "100"})).code,
            h::kExitUsage);
  EXPECT_EQ(run_cli({"simulate", "--dist", "cauchy"}).code, h::kExitUsage);
  const auto ragged = run_cli({"test", path("ragged.csv")});
  EXPECT_EQ(ragged.code, h::kExitData);
  EXPECT_NE(ragged.err.find("row 2"), std::string::npos);
  EXPECT_EQ(run_cli({"test", path("tiny.csv")}).code, h::kExitData);
  EXPECT_EQ(run_cli({"test", path("missing.csv")}).code, h::kExitData);
}

TEST_F(CliTest, ThreadsDoNotChangeOutput) {
  auto strip = [](std::string s) {
    auto j = nlohmann::json::parse(s);
    j.erase("wall_clock_seconds");
    j["config"].erase("threads");
    return j;
  };
  const auto a = run_cli(with_quick({"simulate", "--dist", "exp-exp", "--n", "40",
                                     "--format", "json", "--threads", "1"}));
  const auto b = run_cli(with_quick({"simulate", "--dist", "exp-exp", "--n", "40",
                                     "--format", "json", "--threads", "4"}));
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(strip(a.out), strip(b.out));
}

TEST_F(CliTest, PowerSubcommand) {
  const auto r = run_cli(with_quick({"power", "--dist", "exp-exp", "--n", "30",
                                     "--reps", "3", "--seed", "7", "--format", "json"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("por exp-exp"), std::string::npos);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("reps"), 3);
  const auto t = run_cli(with_quick({"power", "--dist", "n2-i", "--n", "30", "--reps", "2"}));
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.out.rfind("por n2-i", 0), 0u);
}

TEST_F(CliTest, TablesSubcommand) {
  const auto r = run_cli({"tables", "--only", "prior-invariance", "--N", "60",
                          "--r", "30", "--reps", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j.dump().empty());
}

}  // namespace
