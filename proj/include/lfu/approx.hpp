// Copyright 2026 The lfu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Continued fractions and a constructive form of Vinogradov's lemma.

#include <cstdint>
#include <vector>

#include "lfu/circle.hpp"

namespace lfu {

struct Convergent {
  std::int64_t a = 0;
  std::int64_t q = 1;
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

struct RationalApprox {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double err = 0;                 // circ_dist(alpha, a/q)
  std::int64_t support_count = 0; // #{n in [-N, N] : ||n alpha|| < eps}
};

struct VinogradovOptions {
  double C_v = 4;
  // Enforce eps < 1/100, 100 eps < delta and delta N > 100.
  bool strict = true;
};

// Exact dyadic form of a float point (denominator a power of two <= 2^62);
// exact points are returned unchanged.
Fraction exact_form(const CirclePoint& alpha);

// Convergents a/q of alpha with q <= q_max, q strictly increasing, 0 <= a < q.
std::vector<Convergent> convergents(const CirclePoint& alpha, std::int64_t q_max);

RationalApprox vinogradov_approx(const CirclePoint& alpha, std::int64_t N, double eps,
                                 double delta, const VinogradovOptions& opts = {});

// #{n in [-N, N] : ||n alpha|| < eps}
std::int64_t support_count(const CirclePoint& alpha, std::int64_t N, double eps);

// Exhaustive minimiser of circ_dist(alpha, a/q) over q <= q_max; ties go to
// the smallest q, then the smallest a.
Convergent best_rational_oracle(const CirclePoint& alpha, std::int64_t q_max);

}  // namespace lfu
