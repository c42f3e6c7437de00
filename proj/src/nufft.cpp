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

#include "nufft.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "lfu/error.hpp"

namespace lfu::detail {

std::vector<std::complex<double>> nufft1(std::span<const double> x,
                                         std::span<const std::complex<double>> c,
                                         std::size_t modes, int spread) {
  if (x.size() != c.size()) throw Error(ErrorCode::kInvalidArgument, "nufft1: size mismatch");
  if (modes == 0) return {};
  constexpr double kTwoPi = 2 * std::numbers::pi;
  constexpr double kRatio = 2.0;
  const std::size_t grid = next_pow2(std::max<std::size_t>(
      static_cast<std::size_t>(kRatio * static_cast<double>(modes)), 4 * spread));
  const double m = static_cast<double>(modes);
  const double r = static_cast<double>(grid) / m;
  const double tau = std::numbers::pi * spread / (m * m * r * (r - 0.5));
  const double h = kTwoPi / static_cast<double>(grid);

  std::vector<std::complex<double>> f(grid);
  const auto n = static_cast<long long>(grid);
  for (std::size_t j = 0; j < x.size(); ++j) {
    double xj = std::fmod(x[j], kTwoPi);
    if (xj < 0) xj += kTwoPi;
    const auto nearest = static_cast<long long>(std::floor(xj / h));
    for (long long l = nearest - spread + 1; l <= nearest + spread; ++l) {
      const double d = xj - h * static_cast<double>(l);
      const double w = std::exp(-d * d / (4 * tau));
      f[static_cast<std::size_t>(((l % n) + n) % n)] += c[j] * w;
    }
  }
  fft(f, true);

  std::vector<std::complex<double>> out(modes);
  const double scale = std::sqrt(std::numbers::pi / tau) / static_cast<double>(grid);
  const auto half = static_cast<long long>(modes / 2);
  for (std::size_t i = 0; i < modes; ++i) {
    const long long k = static_cast<long long>(i) - half;
    const auto kd = static_cast<double>(k);
    out[i] = f[static_cast<std::size_t>(((k % n) + n) % n)] * (scale * std::exp(kd * kd * tau));
  }
  return out;
}

}  // namespace lfu::detail
