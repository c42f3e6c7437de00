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

#include "lfu/approx.hpp"

#include <cmath>
#include <string>

#include "lfu/error.hpp"

namespace lfu {
namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

}  // namespace

Fraction exact_form(const CirclePoint& alpha) {
  if (alpha.is_exact()) return alpha.fraction();
  const double v = alpha.value();
  const auto num = static_cast<std::int64_t>(std::llround(std::ldexp(v, 62)));
  return CirclePoint::exact(num, std::int64_t{1} << 62).fraction();
}

std::vector<Convergent> convergents(const CirclePoint& alpha, std::int64_t q_max) {
  if (q_max < 1) throw Error(ErrorCode::kInvalidArgument, "q_max must be >= 1");
  const Fraction f = exact_form(alpha);
  std::vector<Convergent> out{{0, 1}};
  // Continued fraction of f.num / f.den = [0; a1, a2, ...].
  i128 num = f.num, den = f.den;
  i128 h_prev = 1, k_prev = 0, h = 0, k = 1;
  while (num != 0) {
    // Invert: den/num = a + rest
    const i128 a = den / num;
    const i128 rest = den - a * num;
    const i128 h_next = a * h + h_prev;
    const i128 k_next = a * k + k_prev;
    if (k_next > q_max) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    den = num;
    num = rest;
    const Convergent c{static_cast<std::int64_t>(h % k), static_cast<std::int64_t>(k)};
    if (c.q > out.back().q) out.push_back(c);
  }
  return out;
}

std::int64_t support_count(const CirclePoint& alpha, std::int64_t N, double eps) {
  std::int64_t count = 1;  // n = 0
  for (std::int64_t n = 1; n <= N; ++n) {
    if (circ_dist(scale(n, alpha), CirclePoint{}) < eps) count += 2;
  }
  return count;
}

RationalApprox vinogradov_approx(const CirclePoint& alpha, std::int64_t N, double eps,
                                 double delta, const VinogradovOptions& opts) {
  if (N < 1 || !(eps > 0 && eps < 0.5) || !(delta > 0 && delta <= 1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "vinogradov_approx needs N >= 1, 0 < eps < 1/2, 0 < delta <= 1");
  }
  if (opts.strict &&
      !(eps < 0.01 && 100 * eps < delta && delta < 1 && delta * static_cast<double>(N) > 100)) {
    throw Error(ErrorCode::kPreconditionViolated,
                "hypotheses 0 < eps < 1/100, 100 eps < delta < 1, delta N > 100 fail");
  }
  RationalApprox out;
  out.support_count = support_count(alpha, N, eps);
  if (static_cast<double>(out.support_count) < delta * static_cast<double>(N)) {
    throw Error(ErrorCode::kHypothesisFails,
                "only " + std::to_string(out.support_count) + " n in [-N, N] have ||n alpha|| < eps");
  }
  const double q_cap = opts.C_v / delta;
  bool found = false;
  for (const auto& c : convergents(alpha, static_cast<std::int64_t>(std::floor(q_cap)) + 1)) {
    if (static_cast<double>(c.q) > q_cap) continue;
    const double err = circ_dist(alpha, CirclePoint::exact(c.a, c.q));
    if (!found || err < out.err) {
      out.a = c.a;
      out.q = c.q;
      out.err = err;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNoDenominatorInRange, "no convergent has q <= C_v/delta");
  }
  return out;
}

Convergent best_rational_oracle(const CirclePoint& alpha, std::int64_t q_max) {
  if (q_max < 1 || q_max > 1'000'000) {
    throw Error(ErrorCode::kInvalidArgument, "q_max must lie in [1, 10^6]");
  }
  const Fraction f = exact_form(alpha);
  Convergent best{0, 1};
  i128 best_num = f.num;  // distance = best_num / (best.q * den)
  best_num = std::min<i128>(best_num, static_cast<i128>(f.den) - f.num);
  for (std::int64_t q = 2; q <= q_max; ++q) {
    const i128 scaled = static_cast<i128>(f.num) * q;
    const i128 lo = scaled / f.den;
    for (i128 a : {lo, lo + 1}) {
      const i128 d = abs128(scaled - a * f.den);
      const std::int64_t red = static_cast<std::int64_t>(a % q);
      // d / (q den) < best_num / (best.q den)
      const i128 lhs = d * best.q;
      const i128 rhs = best_num * q;
      if (lhs < rhs || (lhs == rhs && q == best.q && red < best.a)) {
        best = {red, q};
        best_num = d;
      }
    }
  }
  return best;
}

}  // namespace lfu
