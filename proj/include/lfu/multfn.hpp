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

// Declarative 1-bounded multiplicative functions and their bulk evaluation.
//
// Text syntax (bit-exact round trip through parse_multfn / to_string):
//   liouville | moebius | one | arch:T=<real> | char:q=<int>,k=<int>
//   rand:seed=<uint64> | mask:lo=<int>,hi=<int> | prod(<spec>|<spec>|...)

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "lfu/primes.hpp"

namespace lfu {

using cplx = std::complex<double>;

struct Liouville {
  friend bool operator==(const Liouville&, const Liouville&) = default;
};
struct Moebius {
  friend bool operator==(const Moebius&, const Moebius&) = default;
};
struct One {
  friend bool operator==(const One&, const One&) = default;
};
// n -> e(t0 log n)
struct ArchimedeanTwist {
  double t0 = 0;
  friend bool operator==(const ArchimedeanTwist&, const ArchimedeanTwist&) = default;
};
struct DirichletCharacter {
  std::int64_t q = 1;
  std::int64_t index = 0;
  friend bool operator==(const DirichletCharacter&, const DirichletCharacter&) = default;
};
// g(p) uniform on {-1, +1}, a pure function of (seed, p).
struct RandomCompletelyMultiplicative {
  std::uint64_t seed = 0;
  friend bool operator==(const RandomCompletelyMultiplicative&,
                         const RandomCompletelyMultiplicative&) = default;
};
// g(p) = 0 for primes p in [lo, hi], 1 for all other primes.
struct PrimeMask {
  std::int64_t lo = 2;
  std::int64_t hi = 1;
  friend bool operator==(const PrimeMask&, const PrimeMask&) = default;
};

class MultFnSpec;
struct Product {
  std::vector<MultFnSpec> factors;
};

class MultFnSpec {
 public:
  using Kind = std::variant<Liouville, Moebius, One, ArchimedeanTwist,
                            DirichletCharacter, RandomCompletelyMultiplicative,
                            PrimeMask, Product>;

  MultFnSpec() : kind_(One{}) {}
  template <typename K>
    requires(!std::is_same_v<std::decay_t<K>, MultFnSpec> &&
             std::is_constructible_v<Kind, K>)
  MultFnSpec(K kind) : kind_(std::move(kind)) {}  // NOLINT(implicit)

  const Kind& kind() const { return kind_; }
  bool completely_multiplicative() const;

  friend bool operator==(const MultFnSpec& a, const MultFnSpec& b);

 private:
  Kind kind_;
};

bool operator==(const Product& a, const Product& b);

MultFnSpec parse_multfn(std::string_view text);
std::string to_string(const MultFnSpec& spec);

// A Dirichlet character mod q. Components of (Z/qZ)* are ordered by ascending
// prime, with (Z/2^e)* (e >= 3) split as <-1> x <5>; odd prime powers use their
// smallest primitive root. The index is read in mixed radix with the first
// component least significant, so index 0 is the principal character.
class CharacterTable {
 public:
  CharacterTable(std::int64_t q, std::int64_t index);

  std::int64_t modulus() const { return q_; }
  std::int64_t index() const { return index_; }
  std::int64_t group_order() const { return phi_; }
  // Values are order()-th roots of unity.
  std::int64_t order() const { return order_; }

  // Phase j with chi(n) = e(j / order()), or -1 when gcd(n, q) > 1.
  std::int64_t phase(std::int64_t n) const;
  cplx operator()(std::int64_t n) const;

 private:
  std::int64_t q_;
  std::int64_t index_;
  std::int64_t phi_ = 1;
  std::int64_t order_ = 1;
  std::vector<std::int32_t> phase_;
  std::vector<cplx> roots_;
};

// Throws kIndexOutOfRange unless 0 <= index < phi(q).
CharacterTable build_character(std::int64_t q, std::int64_t index);

// e(num/den) with exact values at multiples of 1/4.
cplx unit_root(std::int64_t num, std::int64_t den);
// e(x) for real x, reducing x mod 1 first.
cplx expi2pi(double x);

// g(start), ..., g(start + len - 1).
std::vector<cplx> eval_range(const MultFnSpec& g, std::int64_t start,
                             std::int64_t len, const SieveLimits& limits = {});
cplx eval_at(const MultFnSpec& g, std::int64_t n);
// g(p) for a prime p.
cplx eval_prime(const MultFnSpec& g, std::int64_t p);

}  // namespace lfu
