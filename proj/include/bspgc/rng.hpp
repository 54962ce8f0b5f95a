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
#include <cstdint>
#include <limits>
#include <random>

namespace bspgc {

// Philox4x32-10 (Salmon et al., Random123). Counter-based: the 128-bit
// counter is (block, block, stream, stream) and the 64-bit key is the seed,
// so any (seed, stream) substream is available without jumping.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (lane_ == 2) {
      out_ = bijection(
          {static_cast<std::uint32_t>(block_),
           static_cast<std::uint32_t>(block_ >> 32),
           static_cast<std::uint32_t>(stream_),
           static_cast<std::uint32_t>(stream_ >> 32)},
          key_);
      ++block_;
      lane_ = 0;
    }
    const std::size_t i = 2 * lane_++;
    return (std::uint64_t(out_[i + 1]) << 32) | out_[i];
  }

  static Block bijection(Block ctr, Key key) noexcept {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block out_{};
  std::size_t lane_ = 2;
};

// One independent random stream. Owned by a single replication at a time;
// copying forks an identical sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(seed, stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  Philox4x32& engine() noexcept { return engine_; }

  std::uint64_t bits() noexcept { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (double(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double normal() { return normal_(engine_); }

  double exponential() noexcept { return -std::log(uniform()); }

  double gamma(double shape) {
    return std::gamma_distribution<double>(shape, 1.0)(engine_);
  }

  // log of a gamma(shape, 1) draw, finite even when the draw itself would
  // underflow: G = G' U^{1/shape} with G' ~ gamma(shape + 1).
  double log_gamma(double shape) {
    if (shape >= 1.0) return std::log(gamma(shape));
    const double g = gamma(shape + 1.0);
    return std::log(g) + std::log(uniform()) / shape;
  }

  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

  double student_t(double dof) {
    return normal() / std::sqrt(chi_squared(dof) / dof);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  Philox4x32 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream ids at or above this value are reserved for run-level resources
// (expectation pools, dataset generation) so they never collide with
// replication indices.
inline constexpr std::uint64_t kReservedStreamBase = std::uint64_t(1) << 62;

// SplitMix64 finalizer; derives child seeds deterministically.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace bspgc
