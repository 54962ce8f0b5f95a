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
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bspgc/errors.hpp"
#include "bspgc/harness/alternatives.hpp"
#include "bspgc/harness/csv.hpp"
#include "bspgc/harness/power_study.hpp"
#include "bspgc/harness/report_json.hpp"
#include "bspgc/harness/tables.hpp"
#include "bspgc/mvn_test.hpp"

namespace bspgc::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

// BSPGC_THREADS, else the hardware concurrency.
inline std::size_t default_threads() {
  if (const char* env = std::getenv("BSPGC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::size_t(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void write_report_text(std::ostream& os, const TestReport& r) {
  os << std::setprecision(6);
  os << "rb:        " << r.rb << "\n"
     << "strength:  " << r.strength << "\n"
     << "verdict:   " << to_string(r.verdict) << "\n"
     << "n, m:      " << r.n << ", " << r.m << "\n"
     << "config:    a=" << r.config.a << " N=" << r.config.N
     << " r=" << r.config.r << " M=" << r.config.M
     << " corr=" << to_key(r.config.corr_method)
     << " scheme=" << to_key(r.config.weight_scheme)
     << " expectation=" << to_key(r.config.expectation_method)
     << " seed=" << r.config.seed << "\n"
     << "prior:     mean=" << r.prior_summary.mean
     << " median=" << r.prior_summary.median << "\n"
     << "posterior: mean=" << r.posterior_summary.mean
     << " median=" << r.posterior_summary.median << "\n";
  for (const auto& w : r.warnings) os << "warning:   " << w << "\n";
  os << "seconds:   " << r.wall_clock_seconds << "\n";
}

namespace detail {

struct CliOptions {
  TestConfig cfg;
  std::string corr = "kendall";
  std::string scheme = "dirichlet";
  std::string pool = "pool";
  std::string format = "text";
};

inline void add_test_flags(CLI::App& sub, CliOptions& o) {
  sub.add_option("--a", o.cfg.a, "DP concentration")
      ->check(CLI::PositiveNumber);
  sub.add_option("--N", o.cfg.N, "atoms per DP approximation")
      ->check(CLI::PositiveNumber);
  sub.add_option("--r", o.cfg.r, "distance replications")
      ->check(CLI::PositiveNumber);
  sub.add_option("--M", o.cfg.M, "RB bins")->check(CLI::Range(2, 1 << 20));
  sub.add_option("--corr", o.corr, "kendall | spearman | gaussian-rank")
      ->check(CLI::IsMember({"kendall", "spearman", "gaussian-rank"}));
  sub.add_option("--scheme", o.scheme, "dirichlet | series")
      ->check(CLI::IsMember({"dirichlet", "series"}));
  sub.add_option("--pool", o.pool,
                 "expectation method: pool | series, or a pool size")
      ->check(CLI::IsMember({"pool", "series"}) | CLI::PositiveNumber);
  sub.add_option("--seed", o.cfg.seed, "64-bit seed");
  sub.add_option("--format", o.format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  sub.add_option("--threads", o.cfg.threads, "worker threads")
      ->check(CLI::PositiveNumber);
}

inline void finish_options(CliOptions& o) {
  o.cfg.corr_method = parse_correlation_method(o.corr);
  o.cfg.weight_scheme = parse_weight_scheme(o.scheme);
  if (o.pool == "series") {
    o.cfg.expectation_method = ExpectationMethod::Series;
  } else {
    o.cfg.expectation_method = ExpectationMethod::MonteCarloPool;
    if (o.pool != "pool") o.cfg.pool_size = std::stoul(o.pool);
  }
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"Bayesian semiparametric Gaussian copula normality test",
               "bspgc"};
  app.require_subcommand(1);
  detail::CliOptions o;
  o.cfg.threads = default_threads();
  o.cfg.seed = 1;

  std::string csv_path;
  auto* test = app.add_subcommand("test", "test a CSV file for normality");
  test->add_option("csv", csv_path, "input CSV")->required();
  detail::add_test_flags(*test, o);

  std::string dist;
  std::size_t n = 50;
  std::size_t reps = 200;
  auto* sim = app.add_subcommand("simulate", "test one synthetic dataset");
  sim->add_option("--dist", dist, "distribution key")->required();
  sim->add_option("--n", n, "sample size")->check(CLI::PositiveNumber);
  detail::add_test_flags(*sim, o);

  auto* power = app.add_subcommand("power", "proportion of rejections");
  power->add_option("--dist", dist, "distribution key")->required();
  power->add_option("--n", n, "sample size")->check(CLI::PositiveNumber);
  power->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  detail::add_test_flags(*power, o);

  TablesConfig tc;
  auto* tables = app.add_subcommand("tables", "desk-scale tables");
  tables->add_option("--N", tc.N, "atoms")->check(CLI::PositiveNumber);
  tables->add_option("--r", tc.r, "replications")->check(CLI::PositiveNumber);
  tables->add_option("--reps", tc.reps, "power-study replications")
      ->check(CLI::PositiveNumber);
  tables->add_option("--seed", tc.seed, "64-bit seed");
  tables->add_option("--threads", o.cfg.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  tables->add_option("--only", tc.only, "table ids")
      ->check(CLI::IsMember(table_ids()));
  tables->add_option("--format", o.format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: usage: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    detail::finish_options(o);
    const bool json = o.format == "json";
    if (*test || *sim) {
      const TestReport rep =
          *test ? run_test(load_csv(csv_path), o.cfg)
                : simulate(parse_alternative(dist), n, o.cfg);
      if (json)
        out << serialize_report(rep) << "\n";
      else
        write_report_text(out, rep);
      for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
    } else if (*power) {
      const auto res = power_study(parse_alternative(dist), n, reps, o.cfg);
      std::ostringstream line;
      line << "por " << to_string(res.alternative) << " n=" << n
           << " reps=" << reps << ": " << res.por << " (" << res.rejections
           << "/" << reps << ")";
      if (json) {
        err << line.str() << "\n";
        out << to_json(res).dump(2) << "\n";
      } else {
        out << line.str() << "\n";
      }
    } else if (*tables) {
      tc.threads = o.cfg.threads;
      const auto result = reproduce_tables(tc);
      if (json)
        out << to_json(result, tc).dump(2) << "\n";
      else
        write_text(out, result);
    }
  } catch (const InvalidConfig& e) {
    err << "error: invalid-config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return kExitData;
  } catch (const InsufficientData& e) {
    err << "error: insufficient-data: " << e.what() << "\n";
    return kExitData;
  } catch (const NotPositiveDefinite& e) {
    err << "error: not-positive-definite: " << e.what() << "\n";
    return kExitData;
  } catch (const std::domain_error& e) {
    err << "error: data: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: data: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  std::vector<const char*> argv{"bspgc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(int(argv.size()), argv.data(), out, err);
}

}  // namespace bspgc::harness
