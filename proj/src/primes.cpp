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

#include "lfu/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfu/error.hpp"

namespace lfu {
namespace {

void check_range(std::int64_t lo, std::int64_t hi, const SieveLimits& limits) {
  if (lo < 2 || lo > hi) {
    throw Error(ErrorCode::kInvalidArgument,
                "sieve range must satisfy 2 <= lo <= hi (got " +
                    std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  if (hi > limits.max_value) {
    throw Error(ErrorCode::kRangeTooLarge,
                "sieve bound " + std::to_string(hi) + " exceeds configured max " +
                    std::to_string(limits.max_value));
  }
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "isqrt of negative");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::int64_t> small_primes(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) {
      composite[static_cast<std::size_t>(j)] = true;
    }
  }
  return out;
}

void for_each_prime(std::int64_t lo, std::int64_t hi,
                    const std::function<void(std::int64_t)>& visit,
                    const SieveLimits& limits) {
  check_range(lo, hi, limits);
  const std::vector<std::int64_t> base = small_primes(isqrt(hi));
  const std::int64_t seg = std::max<std::int64_t>(limits.segment_size, 1024);
  std::vector<char> composite;
  for (std::int64_t start = lo; start <= hi; start += seg) {
    const std::int64_t end = std::min(hi, start + seg - 1);
    composite.assign(static_cast<std::size_t>(end - start + 1), 0);
    for (std::int64_t p : base) {
      if (p * p > end) break;
      std::int64_t m = std::max(p * p, (start + p - 1) / p * p);
      for (; m <= end; m += p) composite[static_cast<std::size_t>(m - start)] = 1;
    }
    for (std::int64_t n = start; n <= end; ++n) {
      if (!composite[static_cast<std::size_t>(n - start)]) visit(n);
    }
  }
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi,
                                    const SieveLimits& limits) {
  std::vector<std::int64_t> out;
  for_each_prime(lo, hi, [&](std::int64_t p) { out.push_back(p); }, limits);
  return out;
}

std::int64_t prime_count(std::int64_t lo, std::int64_t hi,
                         const SieveLimits& limits) {
  std::int64_t count = 0;
  for_each_prime(lo, hi, [&](std::int64_t) { ++count; }, limits);
  return count;
}

SpfSegment spf_segment(std::int64_t lo, std::int64_t hi,
                       const SieveLimits& limits) {
  check_range(lo, hi, limits);
  if (hi - lo + 1 > limits.segment_size) {
    throw Error(ErrorCode::kRangeTooLarge,
                "segment of length " + std::to_string(hi - lo + 1) +
                    " exceeds the memory budget of " +
                    std::to_string(limits.segment_size) + " entries");
  }
  SpfSegment seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.table.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (std::int64_t p : small_primes(isqrt(hi))) {
    std::int64_t m = std::max(p * p, (lo + p - 1) / p * p);
    for (; m <= hi; m += p) {
      auto& slot = seg.table[static_cast<std::size_t>(m - lo)];
      if (slot == 0) slot = p;
    }
  }
  for (std::int64_t n = lo; n <= hi; ++n) {
    auto& slot = seg.table[static_cast<std::size_t>(n - lo)];
    if (slot == 0) slot = n;
  }
  return seg;
}

double mertens_sum(std::int64_t lo, std::int64_t hi, const SieveLimits& limits) {
  long double acc = 0;
  for_each_prime(lo, hi, [&](std::int64_t p) { acc += 1.0L / p; }, limits);
  return static_cast<double>(acc);
}

std::vector<PrimePower> factorize(std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "factorize needs n >= 1");
  std::vector<PrimePower> out;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace lfu
