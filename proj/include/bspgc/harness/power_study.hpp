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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "bspgc/harness/alternatives.hpp"
#include "bspgc/harness/report_json.hpp"
#include "bspgc/mvn_test.hpp"
#include "bspgc/rng.hpp"

namespace bspgc::harness {

inline constexpr std::uint64_t kDataStream = kReservedStreamBase + 1;

// Seed of replication k in a study seeded with `seed`.
inline std::uint64_t replication_seed(std::uint64_t seed, std::size_t k) {
  return mix_seed(seed, k);
}

inline Matrix simulated_data(const AlternativeSpec& spec, std::size_t n,
                             std::uint64_t seed) {
  RngStream rng(seed, kDataStream);
  return generate_alternative(spec, n, rng);
}

// One synthetic dataset from `spec`, tested with cfg.
inline TestReport simulate(const AlternativeSpec& spec, std::size_t n,
                           const TestConfig& cfg) {
  return run_test(simulated_data(spec, n, cfg.seed), cfg);
}

struct PowerStudyResult {
  AlternativeSpec alternative;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t rejections = 0;
  double por = 0;
  std::vector<Verdict> verdicts;
  std::vector<double> rb;
  std::vector<double> strength;
  TestConfig config;

  bool operator==(const PowerStudyResult&) const = default;
};

// reps independent datasets; replication k uses replication_seed(seed, k)
// for both its data and its test. Replications run in parallel, each test
// single-threaded.
inline PowerStudyResult power_study(const AlternativeSpec& spec, std::size_t n,
                                    std::size_t reps, const TestConfig& cfg) {
  if (reps == 0) throw std::invalid_argument("power_study: reps must be >= 1");
  PowerStudyResult res;
  res.alternative = spec;
  res.n = n;
  res.reps = reps;
  res.config = cfg;
  res.verdicts.resize(reps);
  res.rb.resize(reps);
  res.strength.resize(reps);
  parallel_for_index(reps, cfg.threads, [&](std::size_t k) {
    TestConfig c = cfg;
    c.seed = replication_seed(cfg.seed, k);
    c.threads = 1;
    const TestReport rep = simulate(spec, n, c);
    res.verdicts[k] = rep.verdict;
    res.rb[k] = rep.rb;
    res.strength[k] = rep.strength;
  });
  for (const auto v : res.verdicts)
    if (v == Verdict::EvidenceAgainst) ++res.rejections;
  res.por = double(res.rejections) / double(reps);
  return res;
}

inline nlohmann::json to_json(const PowerStudyResult& p) {
  std::vector<std::string> verdicts;
  for (const auto v : p.verdicts) verdicts.emplace_back(to_string(v));
  return {{"schema_version", kReportSchemaVersion},
          {"distribution", to_string(p.alternative)},
          {"n", p.n},
          {"reps", p.reps},
          {"rejections", p.rejections},
          {"por", p.por},
          {"config", p.config},
          {"verdicts", verdicts},
          {"rb", p.rb},
          {"strength", p.strength}};
}

}  // namespace bspgc::harness
