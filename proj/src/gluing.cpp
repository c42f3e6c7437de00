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

#include "lfu/gluing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "lfu/error.hpp"
#include "lfu/primes.hpp"

namespace lfu {
namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    const std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw Error(ErrorCode::kInvalidArgument, "moduli are not coprime");
  return ((x % m) + m) % m;
}

std::int64_t floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

double residual(std::int64_t p, const CirclePoint& alpha, const CirclePoint& target) {
  return circ_dist(scale(p, alpha), target);
}

void check_scale(std::span<const PhasedPrime> primes, double P, const GluingConstants& k) {
  for (const auto& pp : primes) {
    const auto p = static_cast<double>(pp.p);
    if (p < P || p > k.window * P) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "prime " + std::to_string(pp.p) + " outside [P, " +
                      std::to_string(k.window) + "P] for P = " + std::to_string(P));
    }
  }
}

}  // namespace

double relation(const PhasedPrime& a, const PhasedPrime& b) {
  return circ_dist(scale(a.p, b.alpha), scale(b.p, a.alpha));
}

bool related(const PhasedPrime& a, const PhasedPrime& b, double eps) {
  const double d = relation(a, b);
  return d < eps || d == 0.0;
}

GlueResult glue_pair(const PhasedPrime& a, const PhasedPrime& b, double eps) {
  if (a.p < 2 || b.p < 2 || a.p == b.p) {
    throw Error(ErrorCode::kInvalidArgument, "glue_pair needs two distinct primes");
  }
  if (!(eps < 1)) throw Error(ErrorCode::kInvalidArgument, "glue_pair needs eps < 1");
  if (!related(a, b, eps)) {
    throw Error(ErrorCode::kIncompatible,
                "relation " + std::to_string(relation(a, b)) + " is not below eps " +
                    std::to_string(eps));
  }
  const std::int64_t p1 = a.p;
  const std::int64_t p2 = b.p;
  // r = p2 a1 - p1 a2 over the representatives in [0, 1); t = nearest integer.
  // Lifts (a1 + i)/p1 and (a2 + j)/p2 with p2 i - p1 j = -t (mod p1 p2) are
  // then (r - t)/(p1 p2) apart, the smallest possible distance.
  std::int64_t t = 0;
  if (a.alpha.is_exact() && b.alpha.is_exact()) {
    const Fraction& f1 = a.alpha.fraction();
    const Fraction& f2 = b.alpha.fraction();
    const i128 num = static_cast<i128>(p2) * f1.num * f2.den - static_cast<i128>(p1) * f2.num * f1.den;
    const i128 den = static_cast<i128>(f1.den) * f2.den;
    t = floor_div(2 * num + den, 2 * den);
    if (2 * (num - static_cast<i128>(t) * den) == -den) {
      throw Error(ErrorCode::kAmbiguousLifts, "two lift pairs are equally close");
    }
  } else {
    const double r = static_cast<double>(p2) * a.alpha.value() -
                     static_cast<double>(p1) * b.alpha.value();
    t = static_cast<std::int64_t>(std::llround(r));
  }
  const std::int64_t i = static_cast<std::int64_t>(
      (static_cast<i128>(-t) % p1 + p1) % p1 * mod_inverse(p2, p1) % p1);
  const std::int64_t j = static_cast<std::int64_t>(
      (static_cast<i128>(t) % p2 + p2) % p2 * mod_inverse(p1, p2) % p2);

  CirclePoint beta1, beta2;
  if (a.alpha.is_exact()) {
    const Fraction& f = a.alpha.fraction();
    beta1 = CirclePoint::exact_wide(static_cast<i128>(f.num) + static_cast<i128>(i) * f.den,
                                    static_cast<i128>(p1) * f.den);
  } else {
    beta1 = CirclePoint::real((a.alpha.value() + static_cast<double>(i)) / static_cast<double>(p1));
  }
  if (b.alpha.is_exact()) {
    const Fraction& f = b.alpha.fraction();
    beta2 = CirclePoint::exact_wide(static_cast<i128>(f.num) + static_cast<i128>(j) * f.den,
                                    static_cast<i128>(p2) * f.den);
  } else {
    beta2 = CirclePoint::real((b.alpha.value() + static_cast<double>(j)) / static_cast<double>(p2));
  }
  GlueResult out;
  out.alpha = midpoint_short_arc(beta1, beta2);
  out.residuals = {{p1, residual(p1, out.alpha, a.alpha)},
                   {p2, residual(p2, out.alpha, b.alpha)}};
  out.a = a;
  out.b = b;
  return out;
}

double contagion_residual(const GlueResult& glued, const PhasedPrime& c, double P,
                          double eps, const GluingConstants& k) {
  if (c.p == glued.a.p || c.p == glued.b.p) {
    throw Error(ErrorCode::kPreconditionViolated, "third prime must differ from the glued pair");
  }
  if (k.enforce_scale_guards && !(eps < k.c_tg / P) && eps != 0.0) {
    throw Error(ErrorCode::kPreconditionViolated,
                "eps = " + std::to_string(eps) + " is not below c_tg/P");
  }
  if (!related(glued.a, glued.b, eps) || !related(glued.a, c, eps) ||
      !related(glued.b, c, eps)) {
    throw Error(ErrorCode::kPreconditionViolated, "pairwise relations fail for the triple");
  }
  return residual(c.p, glued.alpha, c.alpha);
}

double pair_transfer_residual(const PhasedPrime& p1, const PhasedPrime& p2,
                              const PhasedPrime& q1, const PhasedPrime& q2,
                              double eps, double P, const GluingConstants& k) {
  const std::int64_t ps[] = {p1.p, p2.p, q1.p, q2.p};
  for (int x = 0; x < 4; ++x) {
    for (int y = x + 1; y < 4; ++y) {
      if (ps[x] == ps[y]) {
        throw Error(ErrorCode::kPreconditionViolated, "pair transfer needs four distinct primes");
      }
    }
  }
  if (k.enforce_scale_guards) {
    const PhasedPrime all[] = {p1, p2, q1, q2};
    check_scale(all, P, k);
    if (!(eps < k.c2 / (P * P)) && eps != 0.0) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "eps = " + std::to_string(eps) + " is not below c2/P^2");
    }
  }
  for (const auto* p : {&p1, &p2}) {
    for (const auto* q : {&q1, &q2}) {
      if (!related(*p, *q, eps)) {
        throw Error(ErrorCode::kPreconditionViolated, "cross relations fail");
      }
    }
  }
  return relation(p1, p2);
}

ConcentrateResult concentrate(std::span<const PhasedPrime> S, double eps, double P,
                              double pair_threshold, const GluingConstants& k) {
  const std::size_t n = S.size();
  {
    std::vector<std::int64_t> ps;
    for (const auto& s : S) {
      if (s.p < 2 || !is_prime(static_cast<std::uint64_t>(s.p))) {
        throw Error(ErrorCode::kPreconditionViolated, std::to_string(s.p) + " is not prime");
      }
      ps.push_back(s.p);
    }
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end()) {
      throw Error(ErrorCode::kPreconditionViolated, "primes of S must be distinct");
    }
  }
  if (k.enforce_scale_guards) {
    check_scale(S, P, k);
    if (!(eps < k.c2 / (P * P)) && eps != 0.0) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "eps = " + std::to_string(eps) + " is not below c2/P^2");
    }
  }

  // Neighbourhood bitsets S_p = {p' != p : p ~ p'}.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> adj(n * words, 0);
  auto set_bit = [&](std::size_t r, std::size_t c) { adj[r * words + c / 64] |= std::uint64_t{1} << (c % 64); };
  auto has_bit = [&](std::size_t r, std::size_t c) { return (adj[r * words + c / 64] >> (c % 64)) & 1; };
  std::int64_t edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (related(S[i], S[j], eps)) {
        set_bit(i, j);
        set_bit(j, i);
        ++edges;
      }
    }
  }
  if (n < 2 || edges == 0 ||
      static_cast<double>(edges) < pair_threshold * static_cast<double>(n * n)) {
    throw Error(ErrorCode::kInsufficientPairs,
                std::to_string(edges) + " compatible pairs among " + std::to_string(n) +
                    " primes is below the threshold");
  }

  // A pair qualifies with two shared neighbours (transfer through them), or
  // with one when the pair is itself related (the relation is then direct).
  struct Candidate {
    std::int64_t common;
    std::int64_t pa, pb;
    std::size_t i, j;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t common = 0;
      for (std::size_t w = 0; w < words; ++w) {
        common += std::popcount(adj[i * words + w] & adj[j * words + w]);
      }
      if (common < (has_bit(i, j) ? 1 : 2)) continue;
      const bool ordered = S[i].p < S[j].p;
      cands.push_back({common, ordered ? S[i].p : S[j].p, ordered ? S[j].p : S[i].p,
                       ordered ? i : j, ordered ? j : i});
    }
  }
  if (cands.empty()) {
    throw Error(ErrorCode::kNoCommonNeighbors, "no pair of primes has enough common neighbours");
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.common != y.common) return x.common > y.common;
    if (x.pa != y.pa) return x.pa < y.pa;
    return x.pb < y.pb;
  });

  const double accept = k.C2 * eps;
  for (const auto& c : cands) {
    double r = 0;
    if (has_bit(c.i, c.j)) {
      r = relation(S[c.i], S[c.j]);
    } else {
      // Transfer through the two smallest shared neighbours.
      std::vector<std::size_t> shared;
      for (std::size_t m = 0; m < n && shared.size() < 2; ++m) {
        if (m != c.i && m != c.j && has_bit(c.i, m) && has_bit(c.j, m)) shared.push_back(m);
      }
      if (shared.size() < 2) continue;
      GluingConstants relaxed = k;
      relaxed.enforce_scale_guards = false;
      r = pair_transfer_residual(S[c.i], S[c.j], S[shared[0]], S[shared[1]], eps, P, relaxed);
    }
    if (!(r < accept || r == 0.0)) continue;
    const GlueResult glued =
        glue_pair(S[c.i], S[c.j], std::max(std::min(accept, 0.5), std::nextafter(r, 1.0)));
    ConcentrateResult out;
    out.alpha = glued.alpha;
    out.p1 = c.pa;
    out.p2 = c.pb;
    out.edges = edges;
    out.common = c.common;
    out.transfer_residual = r;
    const double bound = k.C_conc * eps / P;
    for (const auto& s : S) {
      const double res = residual(s.p, out.alpha, s.alpha);
      if (res <= bound) out.matched.push_back(s.p);
    }
    std::sort(out.matched.begin(), out.matched.end());
    return out;
  }
  throw Error(ErrorCode::kConcentrationFailed,
              "no candidate pair passed the transfer check");
}

}  // namespace lfu
