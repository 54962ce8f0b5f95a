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
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bspgc/errors.hpp"

namespace bspgc {

// Prior and posterior draws of the distance. Negative draws (Monte Carlo
// noise in the expectation pool) are clamped to 0 and counted.
struct DistanceSamples {
  std::vector<double> prior;
  std::vector<double> posterior;
  std::size_t clamped_prior = 0;
  std::size_t clamped_posterior = 0;

  static DistanceSamples make(std::vector<double> prior,
                              std::vector<double> posterior) {
    if (prior.empty() || posterior.empty())
      throw std::invalid_argument("DistanceSamples: empty sample");
    DistanceSamples s;
    auto clamp = [](std::vector<double>& v, std::size_t& count) {
      for (double& d : v) {
        if (!std::isfinite(d))
          throw std::invalid_argument("DistanceSamples: non-finite draw");
        if (d < 0.0) {
          d = 0.0;
          ++count;
        }
      }
    };
    clamp(prior, s.clamped_prior);
    clamp(posterior, s.clamped_posterior);
    s.prior = std::move(prior);
    s.posterior = std::move(posterior);
    return s;
  }
};

struct RbResult {
  double rb_at_zero = 0.0;
  double strength = 0.0;
  std::size_t bins = 0;  // M
  std::size_t i0 = 0;
  // d_0 = 0, d_{i/M} prior quantiles, d_1 = prior maximum.
  std::vector<double> bin_edges;
  // Per-bin relative belief, prior and posterior content. Bin 0 starts at
  // -inf and the last bin is open above so contents sum to one; empty or
  // zero-prior-content bins are merged and flagged.
  std::vector<double> per_bin_rb;
  std::vector<double> prior_content;
  std::vector<double> posterior_content;
  std::vector<char> merged;
  std::size_t merged_bin_count = 0;
  // Posterior content of [0, d_{i0/M}], the region whose RB is rb_at_zero.
  double low_region_content = 0.0;
};

enum class Verdict { EvidenceFor, EvidenceAgainst, NoEvidence };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::EvidenceFor:
      return "evidence_for";
    case Verdict::EvidenceAgainst:
      return "evidence_against";
    case Verdict::NoEvidence:
      return "no_evidence";
  }
  return "unknown";
}

// Posterior probability that the RB of the true distance does not exceed the
// RB at zero. The low region [0, d_{i0/M}] has RB equal to rb_at_zero and is
// always counted.
inline double estimate_strength(const RbResult& r) {
  const double tol = 1e-12 * std::max(1.0, r.rb_at_zero);
  double s = r.low_region_content;
  for (std::size_t i = r.i0; i < r.per_bin_rb.size(); ++i)
    if (!r.merged[i] && r.per_bin_rb[i] <= r.rb_at_zero + tol)
      s += r.posterior_content[i];
  return std::clamp(s, 0.0, 1.0);
}

inline RbResult estimate_rb(const DistanceSamples& samples, std::size_t M,
                            std::size_t i0) {
  if (M < 2) throw std::invalid_argument("estimate_rb: M must be >= 2");
  if (i0 < 1 || i0 >= M)
    throw std::invalid_argument("estimate_rb: need 1 <= i0 < M");
  if (samples.prior.size() < M)
    throw std::invalid_argument("estimate_rb: need at least M prior draws");
  if (samples.posterior.empty())
    throw std::invalid_argument("estimate_rb: empty posterior sample");

  std::vector<double> p = samples.prior;
  std::vector<double> q = samples.posterior;
  std::sort(p.begin(), p.end());
  std::sort(q.begin(), q.end());
  if (p.front() == p.back())
    throw DegeneratePrior("estimate_rb: all prior draws are equal");
  const std::size_t rp = p.size(), rq = q.size();

  RbResult res;
  res.bins = M;
  res.i0 = i0;
  res.bin_edges.resize(M + 1);
  res.bin_edges[0] = 0.0;
  for (std::size_t i = 1; i < M; ++i)
    res.bin_edges[i] = p[(rp * i + M - 1) / M - 1];  // type-1 quantile
  res.bin_edges[M] = p.back();

  auto count_le = [](const std::vector<double>& v, double t) {
    return std::size_t(std::upper_bound(v.begin(), v.end(), t) - v.begin());
  };
  // Counts at the bin boundaries; boundary 0 is -inf and boundary M is +inf.
  std::vector<std::size_t> cp(M + 1), cq(M + 1);
  cp[0] = cq[0] = 0;
  cp[M] = rp;
  cq[M] = rq;
  for (std::size_t i = 1; i < M; ++i) {
    cp[i] = count_le(p, res.bin_edges[i]);
    cq[i] = count_le(q, res.bin_edges[i]);
  }

  std::vector<std::size_t> np(M), nq(M);
  for (std::size_t i = 0; i < M; ++i) {
    np[i] = cp[i + 1] - cp[i];
    nq[i] = cq[i + 1] - cq[i];
  }
  res.merged.assign(M, 0);
  // A zero-prior top bin can still hold posterior mass; fold it downward.
  for (std::size_t i = M; i-- > 1;) {
    if (np[i] == 0) {
      res.merged[i] = 1;
      std::size_t j = i;
      while (j > 0 && res.merged[j]) --j;
      nq[j] += nq[i];
      nq[i] = 0;
    }
  }

  res.per_bin_rb.assign(M, 0.0);
  res.prior_content.assign(M, 0.0);
  res.posterior_content.assign(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    res.prior_content[i] = double(np[i]) / double(rp);
    res.posterior_content[i] = double(nq[i]) / double(rq);
    if (!res.merged[i])
      res.per_bin_rb[i] = res.posterior_content[i] / res.prior_content[i];
    else
      ++res.merged_bin_count;
  }

  res.low_region_content = double(cq[i0]) / double(rq);
  res.rb_at_zero = res.low_region_content / (double(cp[i0]) / double(rp));
  res.strength = estimate_strength(res);
  return res;
}

inline Verdict verdict(const RbResult& r) {
  if (r.rb_at_zero > 1.0) return Verdict::EvidenceFor;
  if (r.rb_at_zero < 1.0) return Verdict::EvidenceAgainst;
  return Verdict::NoEvidence;
}

inline Verdict verdict(double rb_at_zero) {
  RbResult r;
  r.rb_at_zero = rb_at_zero;
  return verdict(r);
}

}  // namespace bspgc
