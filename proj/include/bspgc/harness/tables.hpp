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
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bspgc/harness/alternatives.hpp"
#include "bspgc/harness/power_study.hpp"
#include "bspgc/harness/studies.hpp"
#include "bspgc/mvn_test.hpp"

namespace bspgc::harness {

// Desk-scale defaults; pass N = r = 1000, reps = 1000 for full scale.
struct TablesConfig {
  std::size_t N = 500;
  std::size_t r = 400;
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::vector<std::string> only;  // table ids; empty means all
};

inline const std::vector<std::string>& table_ids() {
  static const std::vector<std::string> ids{
      "posterior-model", "correlation",      "rb-strength",
      "por",             "prior-invariance", "prior-data-conflict"};
  return ids;
}

struct Table {
  std::string id;
  std::string title;
  std::vector<std::string> columns;
  std::vector<nlohmann::json> rows;  // each an array matching columns
};

namespace detail {

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

inline TestConfig base_config(const TablesConfig& t, double a,
                              std::uint64_t seed) {
  TestConfig c;
  c.a = a;
  c.N = t.N;
  c.r = t.r;
  c.seed = seed;
  c.threads = t.threads;
  return c;
}

inline const std::vector<double>& a_grid() {
  static const std::vector<double> g{1.0, 5.0, 10.0};
  return g;
}

}  // namespace detail

inline Table posterior_model_table(const TablesConfig& t) {
  Table tab{"posterior-model",
            "mean energy distance between truth and posterior model, n = 1000",
            {"distribution", "a", "mean_distance"},
            {}};
  const std::vector<AlternativeSpec> truths{
      parse_alternative("n2-a2"),  parse_alternative("pvii-1"),
      parse_alternative("t5-i2"),  parse_alternative("exp-exp"),
      parse_alternative("ln2-b2"), parse_alternative("beta-beta")};
  std::uint64_t k = 0;
  for (const auto& truth : truths) {
    const Matrix data = simulated_data(truth, 1000, mix_seed(t.seed, k++));
    for (double a : detail::a_grid()) {
      const auto cfg = detail::base_config(t, a, t.seed);
      tab.rows.push_back({to_string(truth), a,
                          detail::mean(posterior_distances_to_truth(data, truth,
                                                                    cfg))});
    }
  }
  return tab;
}

inline Table correlation_table(const TablesConfig& t) {
  Table tab{"correlation",
            "mean energy distance to truth by correlation estimator, a = 1",
            {"distribution", "gaussian-rank", "kendall", "spearman"},
            {}};
  const std::vector<AlternativeSpec> truths{parse_alternative("pvii-1"),
                                            parse_alternative("n2-a2")};
  std::uint64_t k = 0;
  for (const auto& truth : truths) {
    const Matrix data = simulated_data(truth, 1000, mix_seed(t.seed, k++));
    nlohmann::json row = nlohmann::json::array({to_string(truth)});
    for (auto m : {CorrelationMethod::GaussianRank, CorrelationMethod::KendallTau,
                   CorrelationMethod::SpearmanRho}) {
      auto cfg = detail::base_config(t, 1.0, t.seed);
      cfg.corr_method = m;
      row.push_back(
          detail::mean(posterior_distances_to_truth(data, truth, cfg)));
    }
    tab.rows.push_back(row);
  }
  return tab;
}

inline const std::vector<std::string>& test_alternatives() {
  static const std::vector<std::string> v{
      "n2-i",   "n2-a2",        "ln2-b2",  "nmix1",     "nmix2",    "t5-i2",
      "exp-exp", "spherical-ln", "pvii-10", "chisq5-sq", "n-chisq5", "n-t3"};
  return v;
}

inline Table rb_strength_table(const TablesConfig& t) {
  Table tab{"rb-strength",
            "relative belief ratio and strength, Kendall, n = 50",
            {"distribution", "a", "rb", "strength", "verdict"},
            {}};
  for (const auto& name : test_alternatives()) {
    const auto spec = parse_alternative(name);
    for (double a : detail::a_grid()) {
      const auto rep = simulate(spec, 50, detail::base_config(t, a, t.seed));
      tab.rows.push_back(
          {name, a, rep.rb, rep.strength, std::string(to_string(rep.verdict))});
    }
  }
  return tab;
}

inline Table por_table(const TablesConfig& t) {
  Table tab{"por",
            "proportion of replications rejecting normality, a = 1, n = 50",
            {"distribution", "reps", "por"},
            {}};
  for (const auto& name : test_alternatives()) {
    const auto res = power_study(parse_alternative(name), 50, t.reps,
                                 detail::base_config(t, 1.0, t.seed));
    tab.rows.push_back({name, res.reps, res.por});
  }
  return tab;
}

// H choices for the prior-distance and prior-data-conflict tables.
struct BaseChoice {
  std::string label;
  BaseMeasure base;
  DistanceReference reference;
};

inline Table prior_invariance_table(const TablesConfig& t) {
  Table tab{"prior-invariance",
            "mean prior distance d(F_N, H) for data from E(0.5)^2, n = 50, a = 1",
            {"H", "mean_distance"},
            {}};
  const Matrix data = simulated_data(parse_alternative("exp-sq"), 50, t.seed);
  const auto cfg = detail::base_config(t, 1.0, t.seed);
  const NullModel null = fit_null(data);
  RngStream pool_rng(cfg.seed, kPoolStream);
  std::vector<BaseChoice> choices;
  choices.push_back({"fitted-null", normal_base_measure(null),
                     make_null_reference(null, cfg, pool_rng)});
  for (const auto* name : {"n2-i", "nmix2"}) {
    const auto spec = parse_alternative(name);
    const auto h = alternative_base_measure(spec);
    choices.push_back({name, h,
                       base_reference(h, Vector::Zero(2),
                                      alternative_covariance(spec),
                                      spec.name != Alternative::NMix2, cfg,
                                      pool_rng)});
  }
  const Vector three = Vector::Constant(2, 3.0);
  choices.push_back({"n2-3-a2", normal_base_measure(three, a2_matrix()),
                     normal_reference(three, a2_matrix(), cfg, pool_rng)});
  for (const auto& c : choices)
    tab.rows.push_back(
        {c.label, detail::mean(prior_distances(c.base, c.reference, cfg))});
  return tab;
}

inline Table prior_data_conflict_table(const TablesConfig& t) {
  Table tab{"prior-data-conflict",
            "RB and strength for E(0.5)^2 data, n = 50, under several H",
            {"H", "a", "rb", "strength"},
            {}};
  const Matrix data = simulated_data(parse_alternative("exp-sq"), 50, t.seed);
  const NullModel null = fit_null(data);
  const Vector three = Vector::Constant(2, 3.0);
  for (double a : detail::a_grid()) {
    const auto cfg = detail::base_config(t, a, t.seed);
    const auto rep = run_test(data, cfg);
    tab.rows.push_back({"fitted-null", a, rep.rb, rep.strength});
    struct Choice {
      const char* label;
      Vector mean;
      Matrix cov;
    };
    for (const auto& ch :
         {Choice{"n2-xbar-i2", null.mean, Matrix::Identity(2, 2)},
          Choice{"n2-3-sx", three, null.covariance}}) {
      RngStream pool_rng(cfg.seed, kPoolStream);
      const auto ref = normal_reference(ch.mean, ch.cov, cfg, pool_rng);
      const auto r = run_test_with_base(
          data, cfg, normal_base_measure(ch.mean, ch.cov), ref);
      tab.rows.push_back({ch.label, a, r.rb, r.strength});
    }
  }
  return tab;
}

inline std::vector<Table> reproduce_tables(const TablesConfig& t) {
  auto wanted = [&](const std::string& id) {
    return t.only.empty() ||
           std::find(t.only.begin(), t.only.end(), id) != t.only.end();
  };
  for (const auto& id : t.only)
    if (std::find(table_ids().begin(), table_ids().end(), id) ==
        table_ids().end())
      throw std::invalid_argument("unknown table '" + id + "'");
  std::vector<Table> out;
  if (wanted("posterior-model")) out.push_back(posterior_model_table(t));
  if (wanted("correlation")) out.push_back(correlation_table(t));
  if (wanted("rb-strength")) out.push_back(rb_strength_table(t));
  if (wanted("por")) out.push_back(por_table(t));
  if (wanted("prior-invariance")) out.push_back(prior_invariance_table(t));
  if (wanted("prior-data-conflict"))
    out.push_back(prior_data_conflict_table(t));
  return out;
}

inline nlohmann::json to_json(const std::vector<Table>& tables,
                              const TablesConfig& t) {
  nlohmann::json out = {{"schema_version", kReportSchemaVersion},
                        {"N", t.N},
                        {"r", t.r},
                        {"reps", t.reps},
                        {"seed", t.seed},
                        {"tables", nlohmann::json::array()}};
  for (const auto& tab : tables)
    out["tables"].push_back({{"id", tab.id},
                             {"title", tab.title},
                             {"columns", tab.columns},
                             {"rows", tab.rows}});
  return out;
}

inline void write_text(std::ostream& os, const std::vector<Table>& tables) {
  for (const auto& tab : tables) {
    os << "## " << tab.id << ": " << tab.title << "\n";
    for (const auto& c : tab.columns) os << std::setw(16) << c;
    os << "\n";
    for (const auto& row : tab.rows) {
      for (const auto& cell : row) {
        std::ostringstream s;
        if (cell.is_string())
          s << cell.get<std::string>();
        else if (cell.is_number_float())
          s << std::setprecision(4) << cell.get<double>();
        else
          s << cell.dump();
        os << std::setw(16) << s.str();
      }
      os << "\n";
    }
    os << "\n";
  }
}

}  // namespace bspgc::harness
