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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "bspgc/mvn_test.hpp"

namespace bspgc {

inline constexpr int kReportSchemaVersion = 1;

namespace detail {

template <class E, std::size_t K>
std::string enum_key(E e, const std::array<std::pair<E, std::string_view>, K>& t) {
  for (const auto& [v, k] : t)
    if (v == e) return std::string(k);
  throw std::invalid_argument("unmapped enum value");
}

template <class E, std::size_t K>
E enum_value(std::string_view key,
             const std::array<std::pair<E, std::string_view>, K>& t,
             const char* what) {
  for (const auto& [v, k] : t)
    if (k == key) return v;
  throw std::invalid_argument(std::string("unknown ") + what + " '" +
                              std::string(key) + "'");
}

inline constexpr std::array<std::pair<CorrelationMethod, std::string_view>, 3>
    kCorrKeys{{{CorrelationMethod::KendallTau, "kendall"},
               {CorrelationMethod::SpearmanRho, "spearman"},
               {CorrelationMethod::GaussianRank, "gaussian-rank"}}};
inline constexpr std::array<std::pair<WeightScheme, std::string_view>, 2>
    kSchemeKeys{{{WeightScheme::DirichletWeights, "dirichlet"},
                 {WeightScheme::SeriesQuantile, "series"}}};
inline constexpr std::array<std::pair<ExpectationMethod, std::string_view>, 2>
    kPoolKeys{{{ExpectationMethod::MonteCarloPool, "pool"},
               {ExpectationMethod::Series, "series"}}};
inline constexpr std::array<std::pair<Verdict, std::string_view>, 3>
    kVerdictKeys{{{Verdict::EvidenceFor, "evidence_for"},
                  {Verdict::EvidenceAgainst, "evidence_against"},
                  {Verdict::NoEvidence, "no_evidence"}}};

}  // namespace detail

inline std::string to_key(CorrelationMethod m) {
  return detail::enum_key(m, detail::kCorrKeys);
}
inline std::string to_key(WeightScheme s) {
  return detail::enum_key(s, detail::kSchemeKeys);
}
inline std::string to_key(ExpectationMethod e) {
  return detail::enum_key(e, detail::kPoolKeys);
}
inline CorrelationMethod parse_correlation_method(std::string_view k) {
  return detail::enum_value(k, detail::kCorrKeys, "correlation method");
}
inline WeightScheme parse_weight_scheme(std::string_view k) {
  return detail::enum_value(k, detail::kSchemeKeys, "weight scheme");
}
inline ExpectationMethod parse_expectation_method(std::string_view k) {
  return detail::enum_value(k, detail::kPoolKeys, "expectation method");
}
inline Verdict parse_verdict(std::string_view k) {
  return detail::enum_value(k, detail::kVerdictKeys, "verdict");
}

inline void to_json(nlohmann::json& j, const TestConfig& c) {
  j = {{"a", c.a},
       {"N", c.N},
       {"r", c.r},
       {"M", c.M},
       {"i0", c.i0},
       {"corr", to_key(c.corr_method)},
       {"scheme", to_key(c.weight_scheme)},
       {"expectation", to_key(c.expectation_method)},
       {"pool_size", c.pool_size},
       {"seed", c.seed},
       {"exact_null_correlation", c.exact_null_correlation},
       {"whiten", c.whiten},
       {"threads", c.threads}};
}

inline void from_json(const nlohmann::json& j, TestConfig& c) {
  j.at("a").get_to(c.a);
  j.at("N").get_to(c.N);
  j.at("r").get_to(c.r);
  j.at("M").get_to(c.M);
  j.at("i0").get_to(c.i0);
  c.corr_method = parse_correlation_method(j.at("corr").get<std::string>());
  c.weight_scheme = parse_weight_scheme(j.at("scheme").get<std::string>());
  c.expectation_method =
      parse_expectation_method(j.at("expectation").get<std::string>());
  j.at("pool_size").get_to(c.pool_size);
  j.at("seed").get_to(c.seed);
  j.at("exact_null_correlation").get_to(c.exact_null_correlation);
  j.at("whiten").get_to(c.whiten);
  j.at("threads").get_to(c.threads);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DistanceSummary, mean, sd, min, q05, q25,
                                   median, q75, q95, max)

inline void to_json(nlohmann::json& j, const TestReport& r) {
  j = {{"schema_version", kReportSchemaVersion},
       {"rb", r.rb},
       {"strength", r.strength},
       {"verdict", to_string(r.verdict)},
       {"n", r.n},
       {"m", r.m},
       {"config", r.config},
       {"prior_summary", r.prior_summary},
       {"posterior_summary", r.posterior_summary},
       {"bin_edges", r.bin_edges},
       {"per_bin_rb", r.per_bin_rb},
       {"merged_bin_count", r.merged_bin_count},
       {"clamped_prior", r.clamped_prior},
       {"clamped_posterior", r.clamped_posterior},
       {"warnings", r.warnings},
       {"wall_clock_seconds", r.wall_clock_seconds}};
}

inline void from_json(const nlohmann::json& j, TestReport& r) {
  const int version = j.at("schema_version").get<int>();
  if (version != kReportSchemaVersion)
    throw std::invalid_argument("unsupported report schema version " +
                                std::to_string(version));
  j.at("rb").get_to(r.rb);
  j.at("strength").get_to(r.strength);
  r.verdict = parse_verdict(j.at("verdict").get<std::string>());
  j.at("n").get_to(r.n);
  j.at("m").get_to(r.m);
  j.at("config").get_to(r.config);
  j.at("prior_summary").get_to(r.prior_summary);
  j.at("posterior_summary").get_to(r.posterior_summary);
  j.at("bin_edges").get_to(r.bin_edges);
  j.at("per_bin_rb").get_to(r.per_bin_rb);
  j.at("merged_bin_count").get_to(r.merged_bin_count);
  j.at("clamped_prior").get_to(r.clamped_prior);
  j.at("clamped_posterior").get_to(r.clamped_posterior);
  j.at("warnings").get_to(r.warnings);
  j.at("wall_clock_seconds").get_to(r.wall_clock_seconds);
}

inline std::string serialize_report(const TestReport& r, int indent = 2) {
  return nlohmann::json(r).dump(indent);
}

inline TestReport parse_report(std::string_view text) {
  return nlohmann::json::parse(text).get<TestReport>();
}

}  // namespace bspgc
