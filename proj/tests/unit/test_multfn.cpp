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

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "lfu/error.hpp"
#include "lfu/multfn.hpp"
#include "oracles.hpp"

using lfu::cplx;

namespace {

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

std::vector<lfu::MultFnSpec> sample_specs() {
  return {lfu::parse_multfn("liouville"),         lfu::parse_multfn("moebius"),
          lfu::parse_multfn("one"),               lfu::parse_multfn("arch:T=300"),
          lfu::parse_multfn("char:q=3,k=1"),      lfu::parse_multfn("char:q=40,k=7"),
          lfu::parse_multfn("rand:seed=42"),      lfu::parse_multfn("mask:lo=11,hi=19"),
          lfu::parse_multfn("prod(char:q=3,k=1|arch:T=300)"),
          lfu::parse_multfn("prod(liouville|char:q=7,k=2)")};
}

}  // namespace

TEST_SUITE("multfn") {

TEST_CASE("character examples") {
  const auto c1 = lfu::build_character(1, 0);
  for (std::int64_t n = 1; n < 20; ++n) CHECK(c1(n) == cplx{1, 0});
  const auto c3 = lfu::build_character(3, 1);
  CHECK(c3(1) == cplx{1, 0});
  CHECK(c3(2) == cplx{-1, 0});
  CHECK(c3(3) == cplx{0, 0});
  CHECK_THROWS_AS(lfu::build_character(5, 4), lfu::Error);
  try {
    lfu::build_character(5, -1);
  } catch (const lfu::Error& e) {
    CHECK(e.code() == lfu::ErrorCode::kIndexOutOfRange);
  }
}

TEST_CASE("characters enumerate the full dual group") {
  // Brute force: each table is a homomorphism on (Z/qZ)*, values are phi(q)-th
  // roots of unity, and the phi(q) tables are pairwise distinct.
  for (std::int64_t q = 1; q <= 40; ++q) {
    const std::int64_t phi = lfu::euler_phi(q);
    std::vector<std::int64_t> units;
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1) units.push_back(a);
    }
    std::set<std::vector<std::int64_t>> seen;
    for (std::int64_t k = 0; k < phi; ++k) {
      const auto chi = lfu::build_character(q, k);
      std::vector<std::int64_t> signature;
      cplx sum{0, 0};
      for (auto a : units) {
        CHECK(std::abs(std::pow(chi(a), static_cast<double>(phi)) - cplx{1, 0}) < 1e-9);
        for (auto b : units) CHECK(close(chi(a * b % q), chi(a) * chi(b), 1e-12));
        signature.push_back(chi.phase(a) * (phi / chi.order()) % phi);
        sum += chi(a);
      }
      for (std::int64_t a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) CHECK(chi(a) == cplx{0, 0});
      }
      // Orthogonality
      if (k == 0) {
        CHECK(close(sum, cplx{static_cast<double>(phi), 0}, 1e-9));
      } else {
        CHECK(std::abs(sum) < 1e-9);
      }
      seen.insert(signature);
    }
    CHECK(seen.size() == static_cast<std::size_t>(phi));
  }
}

TEST_CASE("mod 5 characters are four distinct homomorphisms") {
  std::set<std::vector<std::int64_t>> distinct;
  for (std::int64_t k = 0; k < 4; ++k) {
    const auto chi = lfu::build_character(5, k);
    std::vector<std::int64_t> sig;
    for (std::int64_t a = 1; a < 5; ++a) sig.push_back(chi.phase(a));
    distinct.insert(sig);
  }
  CHECK(distinct.size() == 4);
}

TEST_CASE("eval_range examples") {
  const auto v = lfu::eval_range(lfu::parse_multfn("liouville"), 101, 10);
  cplx sum{0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    const std::int64_t n = 101 + static_cast<std::int64_t>(i);
    const double expect = (oracle::big_omega(n) % 2) ? -1.0 : 1.0;
    CHECK(v[i] == cplx{expect, 0});
    CHECK((v[i].real() > 0) == (n == 104 || n == 106));
  }
  CHECK(sum == cplx{-6, 0});
  for (const auto& x : lfu::eval_range(lfu::parse_multfn("one"), 12345, 50)) CHECK(x == cplx{1, 0});
  CHECK(lfu::eval_range(lfu::parse_multfn("moebius"), 4, 1) == std::vector<cplx>{{0, 0}});
  CHECK(lfu::eval_range(lfu::parse_multfn("one"), 5, 0).empty());
}

TEST_CASE("sieve evaluation agrees with factorization") {
  lfu::SieveLimits small;
  small.segment_size = 4096;
  const auto lv = lfu::eval_range(lfu::parse_multfn("liouville"), 999000, 20000, small);
  const auto mv = lfu::eval_range(lfu::parse_multfn("moebius"), 999000, 20000, small);
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const std::int64_t n = 999000 + static_cast<std::int64_t>(i);
    CHECK(lv[i].real() == ((oracle::big_omega(n) % 2) ? -1.0 : 1.0));
    CHECK(mv[i].real() == static_cast<double>(oracle::moebius(n)));
  }
  for (const auto& g : sample_specs()) {
    const auto vals = lfu::eval_range(g, 5000, 500);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      CHECK(close(vals[i], lfu::eval_at(g, 5000 + static_cast<std::int64_t>(i)), 1e-12));
    }
  }
}

TEST_CASE("multiplicativity on random coprime pairs") {
  std::mt19937_64 rng(11);
  for (const auto& g : sample_specs()) {
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
      const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 10000);
      const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 10000);
      if (std::gcd(m, n) != 1) continue;
      if (!close(lfu::eval_at(g, m * n), lfu::eval_at(g, m) * lfu::eval_at(g, n), 1e-12)) ++failures;
    }
    CHECK_MESSAGE(failures == 0, lfu::to_string(g));
  }
}

TEST_CASE("values are 1-bounded") {
  for (const auto& g : sample_specs()) {
    double mx = 0;
    for (const auto& v : lfu::eval_range(g, 1, 1000000)) mx = std::max(mx, std::abs(v));
    CHECK_MESSAGE(mx <= 1 + 1e-12, lfu::to_string(g));
    CHECK(lfu::eval_at(g, 1) == cplx{1, 0});
  }
}

TEST_CASE("zero twist equals one") {
  const auto a = lfu::eval_range(lfu::parse_multfn("arch:T=0"), 1, 100000);
  for (const auto& v : a) CHECK(v == cplx{1, 0});
}

TEST_CASE("random completely multiplicative values") {
  const auto g = lfu::parse_multfn("rand:seed=42");
  int plus = 0, total = 0;
  for (std::int64_t p : lfu::primes_in(2, 20000)) {
    const cplx v = lfu::eval_prime(g, p);
    CHECK((v == cplx{1, 0} || v == cplx{-1, 0}));
    plus += v.real() > 0;
    ++total;
  }
  CHECK(std::abs(plus - total / 2) < 4 * std::sqrt(static_cast<double>(total)));
  CHECK(lfu::eval_at(g, 49) == cplx{1, 0});  // g(7)^2
}

TEST_CASE("spec text round trip") {
  for (const char* s : {"liouville", "moebius", "one", "arch:T=300", "arch:T=-2.5", "char:q=3,k=1",
                        "rand:seed=42", "mask:lo=11,hi=19", "prod(char:q=3,k=1|arch:T=300)",
                        "prod(liouville|prod(one|char:q=8,k=3))"}) {
    CHECK(lfu::to_string(lfu::parse_multfn(s)) == s);
  }
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const lfu::MultFnSpec spec = lfu::ArchimedeanTwist{u(rng)};
    const auto back = lfu::parse_multfn(lfu::to_string(spec));
    CHECK(back == spec);
    CHECK(std::get<lfu::ArchimedeanTwist>(back.kind()).t0 ==
          std::get<lfu::ArchimedeanTwist>(spec.kind()).t0);
  }
  CHECK(lfu::parse_multfn(" char: k=1 , q=3 ") == lfu::parse_multfn("char:q=3,k=1"));
}

TEST_CASE("malformed specs") {
  for (const char* s : {"arch:T=", "arch:T=abc", "arch:T=inf", "char:q=3", "foo", "prod(one|",
                        "prod()", "rand:seed=-1", "char:q=3,k=1,z=2", "arch:T=1,T=2"}) {
    CHECK_THROWS_AS(lfu::parse_multfn(s), lfu::Error);
  }
  try {
    lfu::parse_multfn("arch:T=");
  } catch (const lfu::Error& e) {
    CHECK(e.code() == lfu::ErrorCode::kParse);
  }
}

TEST_CASE("completeness flag") {
  CHECK(lfu::parse_multfn("liouville").completely_multiplicative());
  CHECK_FALSE(lfu::parse_multfn("moebius").completely_multiplicative());
  CHECK_FALSE(lfu::parse_multfn("prod(moebius|one)").completely_multiplicative());
}

}  // TEST_SUITE
