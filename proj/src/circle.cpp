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

#include "lfu/circle.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lfu/error.hpp"
#include "text_util.hpp"

namespace lfu {
namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

i128 gcd_wide(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double normalize_unit(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, "circle point must be finite");
  }
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  return r;
}

Fraction half(const Fraction& f) {
  const CirclePoint p = CirclePoint::exact_wide(f.num, static_cast<i128>(f.den) * 2);
  return p.fraction();
}

}  // namespace

double Fraction::to_double() const {
  constexpr std::int64_t kExactLimit = std::int64_t{1} << 53;
  if (num < kExactLimit && den < kExactLimit) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  return static_cast<double>(static_cast<long double>(num) /
                             static_cast<long double>(den));
}

CirclePoint CirclePoint::exact(std::int64_t num, std::int64_t den) {
  return exact_wide(num, den);
}

CirclePoint CirclePoint::exact_wide(i128 num, i128 den) {
  if (den <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "denominator must be positive");
  }
  num %= den;
  if (num < 0) num += den;
  if (num == 0) return CirclePoint(Fraction{0, 1});
  const i128 g = gcd_wide(num, den);
  num /= g;
  den /= g;
  if (den > kInt64Max) {
    throw Error(ErrorCode::kOverflow,
                "exact circle arithmetic exceeds 64-bit denominators");
  }
  return CirclePoint(Fraction{static_cast<std::int64_t>(num),
                              static_cast<std::int64_t>(den)});
}

CirclePoint CirclePoint::real(double value) {
  return CirclePoint(normalize_unit(value));
}

const Fraction& CirclePoint::fraction() const {
  if (const auto* f = std::get_if<Fraction>(&rep_)) return *f;
  throw Error(ErrorCode::kInvalidArgument, "circle point is not exact");
}

double CirclePoint::value() const {
  if (const auto* f = std::get_if<Fraction>(&rep_)) return f->to_double();
  return std::get<double>(rep_);
}

double frac_mul(std::int64_t n, double x) {
  constexpr std::int64_t kSplit = std::int64_t{1} << 52;
  if (n > -kSplit && n < kSplit) {
    const double nd = static_cast<double>(n);
    const double hi = nd * x;
    const double lo = std::fma(nd, x, -hi);
    return normalize_unit((hi - std::floor(hi)) + lo);
  }
  // n = a * 2^32 + b; 2^32 * x is exact in binary floating point.
  const std::int64_t a = n >> 32;
  const std::int64_t b = n - (a << 32);
  const double shifted = normalize_unit(std::ldexp(x, 32));
  return normalize_unit(frac_mul(a, shifted) + frac_mul(b, x));
}

CirclePoint sub(const CirclePoint& a, const CirclePoint& b) {
  if (a.is_exact() && b.is_exact()) {
    const Fraction& x = a.fraction();
    const Fraction& y = b.fraction();
    const i128 num = static_cast<i128>(x.num) * y.den - static_cast<i128>(y.num) * x.den;
    return CirclePoint::exact_wide(num, static_cast<i128>(x.den) * y.den);
  }
  return CirclePoint::real(a.value() - b.value());
}

CirclePoint add(const CirclePoint& a, const CirclePoint& b) {
  if (a.is_exact() && b.is_exact()) {
    const Fraction& x = a.fraction();
    const Fraction& y = b.fraction();
    const i128 num = static_cast<i128>(x.num) * y.den + static_cast<i128>(y.num) * x.den;
    return CirclePoint::exact_wide(num, static_cast<i128>(x.den) * y.den);
  }
  return CirclePoint::real(a.value() + b.value());
}

std::optional<Fraction> circ_dist_exact(const CirclePoint& a,
                                        const CirclePoint& b) {
  if (!a.is_exact() || !b.is_exact()) return std::nullopt;
  const Fraction d = sub(a, b).fraction();
  if (2 * static_cast<i128>(d.num) <= d.den) return d;
  return Fraction{d.den - d.num, d.den};
}

double circ_dist(const CirclePoint& a, const CirclePoint& b) {
  if (auto exact = circ_dist_exact(a, b)) return exact->to_double();
  const double d = std::fabs(a.value() - b.value());
  return std::min(d, 1.0 - d);
}

double signed_offset(const CirclePoint& a, const CirclePoint& b) {
  const double d = sub(a, b).value();
  return d > 0.5 ? d - 1.0 : d;
}

CirclePoint scale(std::int64_t n, const CirclePoint& a) {
  if (a.is_exact()) {
    const Fraction& f = a.fraction();
    const i128 num = static_cast<i128>(n) * f.num % f.den;
    return CirclePoint::exact_wide(num, f.den);
  }
  return CirclePoint::real(frac_mul(n, a.value()));
}

std::vector<CirclePoint> lift_set(const CirclePoint& a, std::int64_t p) {
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "lift order must be >= 1");
  std::vector<CirclePoint> out;
  out.reserve(static_cast<std::size_t>(p));
  if (a.is_exact()) {
    const Fraction& f = a.fraction();
    for (std::int64_t k = 0; k < p; ++k) {
      out.push_back(CirclePoint::exact_wide(
          static_cast<i128>(f.num) + static_cast<i128>(k) * f.den,
          static_cast<i128>(p) * f.den));
    }
  } else {
    const double v = a.value();
    for (std::int64_t k = 0; k < p; ++k) {
      out.push_back(CirclePoint::real((v + static_cast<double>(k)) /
                                      static_cast<double>(p)));
    }
  }
  return out;
}

CirclePoint midpoint_short_arc(const CirclePoint& a, const CirclePoint& b) {
  // Order the arguments so the result does not depend on argument order.
  const bool swap = a.value() > b.value() ||
                    (a.value() == b.value() && !a.is_exact() && b.is_exact());
  const CirclePoint& lo = swap ? b : a;
  const CirclePoint& hi = swap ? a : b;

  if (lo.is_exact() && hi.is_exact()) {
    const Fraction d = sub(hi, lo).fraction();
    const i128 twice = 2 * static_cast<i128>(d.num);
    if (twice == d.den) {
      throw Error(ErrorCode::kAntipodalInput, "midpoint of antipodal points");
    }
    if (twice < d.den) return add(lo, CirclePoint::exact(half(d).num, half(d).den));
    const Fraction rest{d.den - d.num, d.den};
    const Fraction h = half(rest);
    return add(hi, CirclePoint::exact(h.num, h.den));
  }

  const double x = lo.value();
  const double y = hi.value();
  const double d = y - x;
  constexpr double kTol = 4 * std::numeric_limits<double>::epsilon();
  if (std::fabs(d - 0.5) <= kTol) {
    throw Error(ErrorCode::kAntipodalInput, "midpoint of antipodal points");
  }
  // Extended precision keeps the midpoint correctly rounded in practice.
  const long double lx = x;
  const long double ly = y;
  if (d < 0.5) return CirclePoint::real(static_cast<double>((lx + ly) / 2));
  long double m = (lx + ly + 1) / 2;
  if (m >= 1) m -= 1;
  return CirclePoint::real(static_cast<double>(m));
}

std::string to_string(const CirclePoint& a) {
  if (a.is_exact()) {
    const Fraction& f = a.fraction();
    return std::to_string(f.num) + "/" + std::to_string(f.den);
  }
  return format_double17(a.value());
}

CirclePoint parse_circle_point(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const auto num = parse_int64(text.substr(0, slash));
    const auto den = parse_int64(text.substr(slash + 1));
    if (!num || !den || *den <= 0) {
      throw Error(ErrorCode::kParse,
                  "malformed exact circle point '" + std::string(text) + "'");
    }
    return CirclePoint::exact(*num, *den);
  }
  const auto v = parse_double(text);
  if (!v) {
    throw Error(ErrorCode::kParse,
                "malformed circle point '" + std::string(text) + "'");
  }
  return CirclePoint::real(*v);
}

}  // namespace lfu
