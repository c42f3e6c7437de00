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

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace lfu {

struct SieveLimits {
  std::int64_t max_value = 1'000'000'000'000;  // largest n any sieve call accepts
  std::int64_t segment_size = std::int64_t{1} << 22;
};

// Smallest prime factor of every n in [lo, hi].
struct SpfSegment {
  std::int64_t lo = 2;
  std::int64_t hi = 1;
  std::vector<std::int64_t> table;

  std::int64_t spf(std::int64_t n) const { return table.at(static_cast<std::size_t>(n - lo)); }
};

// Primes in [lo, hi], ascending. Throws kRangeTooLarge past limits.max_value.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi,
                                    const SieveLimits& limits = {});

// Streams the primes of [lo, hi] in ascending order, one segment at a time.
void for_each_prime(std::int64_t lo, std::int64_t hi,
                    const std::function<void(std::int64_t)>& visit,
                    const SieveLimits& limits = {});

std::int64_t prime_count(std::int64_t lo, std::int64_t hi,
                         const SieveLimits& limits = {});

// Throws kRangeTooLarge when hi - lo + 1 exceeds limits.segment_size.
SpfSegment spf_segment(std::int64_t lo, std::int64_t hi,
                       const SieveLimits& limits = {});

// Sum of 1/p over primes p in [lo, hi].
double mertens_sum(std::int64_t lo, std::int64_t hi,
                   const SieveLimits& limits = {});

// Deterministic Miller-Rabin, valid for all 64-bit n.
bool is_prime(std::uint64_t n);

// Primes <= limit by a plain Eratosthenes sieve (limit kept small by callers).
std::vector<std::int64_t> small_primes(std::int64_t limit);

std::int64_t isqrt(std::int64_t n);

struct PrimePower {
  std::int64_t p;
  int e;
};
// Trial division; intended for n up to about 10^12.
std::vector<PrimePower> factorize(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);

}  // namespace lfu
