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

// Phase relations between (prime, frequency) pairs and the constructive steps
// that turn pairwise compatibility ||p a_q - q a_p|| < eps into a single
// frequency alpha with p alpha ~ a_p.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lfu/circle.hpp"

namespace lfu {

struct PhasedPrime {
  std::int64_t p = 2;
  CirclePoint alpha;
};

struct GlueResult {
  CirclePoint alpha;
  // (p, ||p alpha - alpha_p||) for both inputs, in argument order.
  std::vector<std::pair<std::int64_t, double>> residuals;
  PhasedPrime a;
  PhasedPrime b;
};

struct GluingConstants {
  double c_tg = 0.01;     // contagion needs eps < c_tg / P
  double c2 = 0.01;       // pair transfer and concentration need eps < c2 / P^2
  double C2 = 16;         // accepted transfer residual, in units of eps
  double C_conc = 100;    // matched primes have residual <= C_conc * eps / P
  double window = 2.0;    // primes must lie in [P, window * P]
  bool enforce_scale_guards = true;
};

// ||a.p * b.alpha - b.p * a.alpha||
double relation(const PhasedPrime& a, const PhasedPrime& b);
// relation(a, b) < eps, also accepting an exact zero when eps == 0.
bool related(const PhasedPrime& a, const PhasedPrime& b, double eps);

// Midpoint of the closest pair of lifts. Throws kIncompatible when the
// relation fails and kAmbiguousLifts on an exact tie.
GlueResult glue_pair(const PhasedPrime& a, const PhasedPrime& b, double eps);

// ||c.p * glued.alpha - c.alpha||; checks the three pairwise relations.
double contagion_residual(const GlueResult& glued, const PhasedPrime& c, double P,
                          double eps, const GluingConstants& k = {});

// ||p1.p * p2.alpha - p2.p * p1.alpha|| given the four cross relations.
double pair_transfer_residual(const PhasedPrime& p1, const PhasedPrime& p2,
                              const PhasedPrime& q1, const PhasedPrime& q2,
                              double eps, double P, const GluingConstants& k = {});

struct ConcentrateResult {
  CirclePoint alpha;
  std::vector<std::int64_t> matched;  // ascending
  std::int64_t p1 = 0;
  std::int64_t p2 = 0;
  std::int64_t edges = 0;    // unordered compatible pairs
  std::int64_t common = 0;   // |S_p1 ∩ S_p2|
  double transfer_residual = 0;
};

// Throws kInsufficientPairs when edges < pair_threshold * |S|^2,
// kNoCommonNeighbors when no pair shares two neighbours (one suffices for a
// pair that is itself related), and
// kConcentrationFailed when no candidate pair passes the transfer check.
ConcentrateResult concentrate(std::span<const PhasedPrime> S, double eps, double P,
                              double pair_threshold, const GluingConstants& k = {});

}  // namespace lfu
