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

// Short-interval exponential sums over the half-open window (x, x+H].

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lfu/circle.hpp"
#include "lfu/multfn.hpp"

namespace lfu {

struct SupResult {
  CirclePoint alpha;
  double magnitude = 0;
};

struct Peak {
  CirclePoint alpha;
  double magnitude = 0;
};

struct PeakReport {
  std::int64_t x = 0;
  std::int64_t H = 0;
  std::vector<Peak> peaks;  // descending magnitude
  double tau = 0;
  double separation = 0;
};

struct SupOptions {
  int oversample = 8;
  int refine_iters = 30;
};

// sum_{x < n <= x+H} g(n) e(alpha n)
cplx expsum(const MultFnSpec& g, std::int64_t x, std::int64_t H,
            const CirclePoint& alpha, const SieveLimits& limits = {});

// Same sum for explicit coefficients: coeffs[j] multiplies e(alpha (x + 1 + j)).
cplx expsum_values(std::span<const cplx> coeffs, std::int64_t x,
                   const CirclePoint& alpha);
// |sum_j coeffs[j] e(alpha j)|, a cheaper form when only the modulus matters.
double trig_poly_abs(std::span<const cplx> coeffs, double alpha);

SupResult sup_trig_poly(std::span<const cplx> coeffs, const SupOptions& opts = {});
SupResult sup_expsum(const MultFnSpec& g, std::int64_t x, std::int64_t H,
                     int oversample = 8, const SieveLimits& limits = {});

// |sum_j coeffs[j] e(k j / M)| for k = 0..M-1, M = next power of two >= oversample * len.
std::vector<double> trig_poly_grid(std::span<const cplx> coeffs, int oversample);

PeakReport detect_peaks_values(std::span<const cplx> coeffs, std::int64_t x,
                               double tau, double c_sep = 1.0, int oversample = 8);
PeakReport detect_peaks(const MultFnSpec& g, std::int64_t x, std::int64_t H,
                        double tau, double c_sep = 1.0, int oversample = 8,
                        const SieveLimits& limits = {});

// |mean_{n in I} f(n) - (p/|I|) sum_{m : mp in I} f(mp)| for I = [start, start + |f|).
double elliott_defect(std::span<const cplx> f, std::int64_t start, std::int64_t p);

// Sum of 1/p over primes p in [p_lo, p_hi] whose Elliott defect exceeds tau.
double exceptional_prime_mass(std::span<const cplx> f, std::int64_t start,
                              std::int64_t p_lo, std::int64_t p_hi, double tau);

}  // namespace lfu
