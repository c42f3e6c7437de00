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

// Pretentious distance
//   D(g; T, Q)^2 = inf over |t| <= T and characters chi of modulus q <= Q of
//                  sum_{p <= T} (1 - Re g(p) p^{it} chi(p)) / p,
// with p^{it} = exp(i t log p). A twist n -> e(T0 log n) pretends to be itself
// at t = -2 pi T0.

#include <cstdint>
#include <vector>

#include "lfu/lifting.hpp"
#include "lfu/multfn.hpp"

namespace lfu {

struct DistanceOptions {
  double step_factor = 0.5;         // grid step = step_factor / (4 log T)
  int candidates = 16;              // grid minima refined per character
  int refine_iters = 60;
  std::int64_t max_primes = 2'000'000;
  double max_grid_work = 4e9;       // grid points x primes-per-block budget
  double t_max = -1;                // testing hook: |t| range, < 0 means T
  int workers = 1;
};

struct DistanceResult {
  double value = 0;
  double value_sq = 0;
  double argmin_t = 0;
  std::int64_t q = 1;
  std::int64_t index = 0;
  std::int64_t prime_cutoff = 0;
  std::int64_t primes = 0;
  double t_grid_step = 0;
  double t_range = 0;
  double value_sq_at_zero = 0;  // principal character, t = 0: an upper-bound witness
};

struct DistanceTerm {
  std::int64_t p = 0;
  cplx g = 0;
  cplx chi = 0;
  double term = 0;  // (1 - Re g(p) p^{it} chi(p)) / p
};

// Throws kInvalidArgument unless T >= 1 and Q >= 1, kCutoffTooLarge past the
// prime or grid budgets.
DistanceResult pretentious_distance(const MultFnSpec& g, double T, std::int64_t Q,
                                    const DistanceOptions& options = {});

// Per-prime terms at (t, chi), summed in ascending p.
std::vector<DistanceTerm> distance_terms(const MultFnSpec& g, double T, double t,
                                         std::int64_t q, std::int64_t index);

struct Theorem1Check {
  bool gate = false;
  double mean_sup = 0;
  double T = 0;
  std::int64_t Q = 1;
  bool distance_computed = false;  // skipped when the gate fails and T is past budget
  DistanceResult distance;
  bool consistent = true;
};

// Gate by build_J1, then D(g; C X^2 / H^2, floor C). Consistent unless the
// gate passes and the distance exceeds C.
Theorem1Check theorem1_check(const MultFnSpec& g, const PipelineParams& params, double C,
                             const DistanceOptions& options = {});
// Same, reusing a scan already computed with these params.
Theorem1Check theorem1_check(const MultFnSpec& g, const PipelineParams& params, double C,
                             const J1Result& j1, const DistanceOptions& options = {});

}  // namespace lfu
