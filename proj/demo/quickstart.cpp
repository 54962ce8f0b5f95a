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

// Tests two small bivariate samples, one normal and one skewed.
#include <iostream>

#include "bspgc/bspgc.hpp"

int main() {
  bspgc::RngStream rng(2026, 0);
  bspgc::Matrix normal(50, 2), skewed(50, 2);
  for (int i = 0; i < 50; ++i) {
    normal(i, 0) = rng.normal();
    normal(i, 1) = 0.2 * normal(i, 0) + rng.normal();
    skewed(i, 0) = rng.exponential() / 0.5;
    skewed(i, 1) = rng.exponential() / 0.25;
  }

  bspgc::TestConfig cfg;
  cfg.N = 500;
  cfg.r = 400;
  cfg.seed = 7;
  for (const auto* x : {&normal, &skewed}) {
    const auto rep = bspgc::run_test(*x, cfg);
    std::cout << "rb = " << rep.rb << ", strength = " << rep.strength << ", "
              << bspgc::to_string(rep.verdict) << "\n";
  }
}
