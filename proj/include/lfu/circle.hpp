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

// Points of the circle group R/Z, held either as a reduced fraction or as a
// double in [0, 1). Exact arithmetic widens to 128 bits before reducing and
// throws ErrorCode::kOverflow when a reduced result no longer fits in 64 bits.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lfu {

using i128 = __int128;

// Reduced fraction num/den with 0 <= num < den.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Fraction&, const Fraction&) = default;
  double to_double() const;
};

class CirclePoint {
 public:
  CirclePoint() : rep_(Fraction{}) {}

  // Any integer numerator is accepted and reduced mod 1; den must be positive.
  static CirclePoint exact(std::int64_t num, std::int64_t den);
  static CirclePoint exact_wide(i128 num, i128 den);
  static CirclePoint real(double value);

  bool is_exact() const { return std::holds_alternative<Fraction>(rep_); }
  // Throws kInvalidArgument for a float point.
  const Fraction& fraction() const;
  double value() const;

  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

 private:
  explicit CirclePoint(Fraction f) : rep_(f) {}
  explicit CirclePoint(double v) : rep_(v) {}

  std::variant<Fraction, double> rep_;
};

// Distance to the nearest integer of a - b; in [0, 1/2].
double circ_dist(const CirclePoint& a, const CirclePoint& b);
// Exact distance when both points are exact.
std::optional<Fraction> circ_dist_exact(const CirclePoint& a,
                                        const CirclePoint& b);
// Representative of a - b in (-1/2, 1/2].
double signed_offset(const CirclePoint& a, const CirclePoint& b);

CirclePoint scale(std::int64_t n, const CirclePoint& a);
CirclePoint add(const CirclePoint& a, const CirclePoint& b);
CirclePoint sub(const CirclePoint& a, const CirclePoint& b);

// All beta with p * beta = a, ascending.
std::vector<CirclePoint> lift_set(const CirclePoint& a, std::int64_t p);

// Midpoint of the shorter arc between a and b. Throws kAntipodalInput when
// the points are (within 4 ulp, in float mode) diametrically opposite.
CirclePoint midpoint_short_arc(const CirclePoint& a, const CirclePoint& b);

// "num/den" for exact points, 17 significant digits for floats.
std::string to_string(const CirclePoint& a);
CirclePoint parse_circle_point(std::string_view text);

// frac(n * x) for a double x, keeping the low-order bits of the product.
double frac_mul(std::int64_t n, double x);

}  // namespace lfu
