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

#include "lfu/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "lfu/error.hpp"
#include "lfu/primes.hpp"

namespace lfu {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio
constexpr std::size_t kResync = 128;

cplx phase_at(std::int64_t n, const CirclePoint& alpha) {
  if (alpha.is_exact()) {
    const Fraction& f = alpha.fraction();
    return unit_root(static_cast<std::int64_t>(static_cast<i128>(n) * f.num % f.den), f.den);
  }
  return expi2pi(frac_mul(n, alpha.value()));
}

void check_window(std::int64_t x, std::int64_t H) {
  if (x < 0 || H < 1) {
    throw Error(ErrorCode::kInvalidArgument, "exponential sums need x >= 0 and H >= 1");
  }
}

}  // namespace

cplx expsum_values(std::span<const cplx> coeffs, std::int64_t x,
                   const CirclePoint& alpha) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    acc += coeffs[j] * phase_at(x + 1 + static_cast<std::int64_t>(j), alpha);
  }
  return acc;
}

cplx expsum(const MultFnSpec& g, std::int64_t x, std::int64_t H,
            const CirclePoint& alpha, const SieveLimits& limits) {
  check_window(x, H);
  const auto coeffs = eval_range(g, x + 1, H, limits);
  return expsum_values(coeffs, x, alpha);
}

double trig_poly_abs(std::span<const cplx> coeffs, double alpha) {
  cplx acc{0.0, 0.0};
  const cplx step = expi2pi(alpha);
  cplx w{1.0, 0.0};
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (j % kResync == 0) w = expi2pi(frac_mul(static_cast<std::int64_t>(j), alpha));
    acc += coeffs[j] * w;
    w *= step;
  }
  return std::abs(acc);
}

std::vector<double> trig_poly_grid(std::span<const cplx> coeffs, int oversample) {
  if (oversample < 1) throw Error(ErrorCode::kInvalidArgument, "oversample must be >= 1");
  const std::size_t m = detail::next_pow2(std::max<std::size_t>(
      1, coeffs.size() * static_cast<std::size_t>(oversample)));
  std::vector<cplx> buf(m, cplx{0.0, 0.0});
  std::copy(coeffs.begin(), coeffs.end(), buf.begin());
  detail::fft(buf, /*positive=*/true);
  std::vector<double> mags(m);
  for (std::size_t k = 0; k < m; ++k) mags[k] = std::abs(buf[k]);
  return mags;
}

SupResult sup_trig_poly(std::span<const cplx> coeffs, const SupOptions& opts) {
  if (coeffs.empty()) return {CirclePoint{}, 0.0};
  const auto mags = trig_poly_grid(coeffs, opts.oversample);
  const auto best = static_cast<std::size_t>(
      std::max_element(mags.begin(), mags.end()) - mags.begin());
  const double m = static_cast<double>(mags.size());
  double best_alpha = static_cast<double>(best) / m;
  double best_mag = mags[best];

  // Golden-section search on [alpha_k - 1/M, alpha_k + 1/M].
  double lo = best_alpha - 1.0 / m;
  double hi = best_alpha + 1.0 / m;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = trig_poly_abs(coeffs, c);
  double fd = trig_poly_abs(coeffs, d);
  for (int it = 0; it < opts.refine_iters; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = trig_poly_abs(coeffs, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = trig_poly_abs(coeffs, d);
    }
  }
  if (fc > best_mag) {
    best_mag = fc;
    best_alpha = c;
  }
  if (fd > best_mag) {
    best_mag = fd;
    best_alpha = d;
  }
  return {CirclePoint::real(best_alpha), best_mag};
}

SupResult sup_expsum(const MultFnSpec& g, std::int64_t x, std::int64_t H,
                     int oversample, const SieveLimits& limits) {
  check_window(x, H);
  if (oversample < 4) throw Error(ErrorCode::kInvalidArgument, "oversample must be >= 4");
  const auto coeffs = eval_range(g, x + 1, H, limits);
  return sup_trig_poly(coeffs, SupOptions{oversample, SupOptions{}.refine_iters});
}

PeakReport detect_peaks_values(std::span<const cplx> coeffs, std::int64_t x,
                               double tau, double c_sep, int oversample) {
  if (!(tau > 0 && tau <= 1)) throw Error(ErrorCode::kInvalidArgument, "tau must lie in (0, 1]");
  if (!(c_sep > 0)) throw Error(ErrorCode::kInvalidArgument, "separation constant must be positive");
  PeakReport report;
  report.x = x;
  report.H = static_cast<std::int64_t>(coeffs.size());
  report.tau = tau;
  report.separation = c_sep / static_cast<double>(coeffs.size());
  if (coeffs.empty()) return report;

  const auto mags = trig_poly_grid(coeffs, oversample);
  const double threshold = tau * static_cast<double>(coeffs.size());
  std::vector<std::size_t> cand;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (mags[k] >= threshold) cand.push_back(k);
  }
  std::stable_sort(cand.begin(), cand.end(),
                   [&](std::size_t a, std::size_t b) { return mags[a] > mags[b]; });
  const double m = static_cast<double>(mags.size());
  std::vector<std::size_t> kept;
  for (std::size_t k : cand) {
    bool separated = true;
    for (std::size_t j : kept) {
      const std::size_t d = k > j ? k - j : j - k;
      const double dist = static_cast<double>(std::min(d, mags.size() - d)) / m;
      if (dist < report.separation) {
        separated = false;
        break;
      }
    }
    if (!separated) continue;
    kept.push_back(k);
    report.peaks.push_back({CirclePoint::real(static_cast<double>(k) / m), mags[k]});
  }
  return report;
}

PeakReport detect_peaks(const MultFnSpec& g, std::int64_t x, std::int64_t H,
                        double tau, double c_sep, int oversample,
                        const SieveLimits& limits) {
  check_window(x, H);
  const auto coeffs = eval_range(g, x + 1, H, limits);
  return detect_peaks_values(coeffs, x, tau, c_sep, oversample);
}

double elliott_defect(std::span<const cplx> f, std::int64_t start, std::int64_t p) {
  const auto len = static_cast<std::int64_t>(f.size());
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "p must be positive");
  if (p > len) {
    throw Error(ErrorCode::kPrimeTooLarge,
                "prime " + std::to_string(p) + " exceeds interval length " + std::to_string(len));
  }
  const cplx total = std::accumulate(f.begin(), f.end(), cplx{0.0, 0.0});
  cplx sub{0.0, 0.0};
  const std::int64_t r = ((start % p) + p) % p;
  const std::int64_t first = r == 0 ? start : start + (p - r);
  for (std::int64_t n = first; n < start + len; n += p) {
    sub += f[static_cast<std::size_t>(n - start)];
  }
  const double inv = 1.0 / static_cast<double>(len);
  return std::abs(total * inv - static_cast<double>(p) * inv * sub);
}

double exceptional_prime_mass(std::span<const cplx> f, std::int64_t start,
                              std::int64_t p_lo, std::int64_t p_hi, double tau) {
  long double mass = 0;
  p_lo = std::max<std::int64_t>(2, p_lo);
  if (p_hi < p_lo) return 0.0;
  for (std::int64_t p : primes_in(p_lo, p_hi)) {
    if (elliott_defect(f, start, p) > tau) mass += 1.0L / p;
  }
  return static_cast<double>(mass);
}

}  // namespace lfu
