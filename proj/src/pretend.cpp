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

#include "lfu/pretend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "lfu/error.hpp"
#include "lfu/primes.hpp"
#include "nufft.hpp"
#include "parallel.hpp"

namespace lfu {
namespace {

constexpr std::size_t kBlock = std::size_t{1} << 16;

struct PrimeData {
  std::vector<std::int64_t> p;
  std::vector<double> log_p;
  std::vector<cplx> g;
};

struct Character {
  std::int64_t q;
  std::int64_t index;
};

std::int64_t cutoff_of(double T) {
  if (!(T >= 1) || !std::isfinite(T)) {
    throw Error(ErrorCode::kInvalidArgument, "distance needs a finite T >= 1");
  }
  return static_cast<std::int64_t>(std::floor(T));
}

double grid_step(double T, const DistanceOptions& o) {
  return o.step_factor / (4 * std::log(std::max(T, 3.0)));
}

std::vector<Character> characters_up_to(std::int64_t Q) {
  std::vector<Character> out;
  for (std::int64_t q = 1; q <= Q; ++q) {
    const std::int64_t phi = euler_phi(q);
    for (std::int64_t k = 0; k < phi; ++k) out.push_back({q, k});
  }
  return out;
}

// Grid points times characters, without sieving.
double grid_work(double T, std::int64_t Q, const DistanceOptions& o) {
  const double t_max = o.t_max < 0 ? T : o.t_max;
  const double points = 2 * std::floor(t_max / grid_step(T, o)) + 1;
  double chars = 0;
  for (std::int64_t q = 1; q <= Q; ++q) chars += static_cast<double>(euler_phi(q));
  return points * chars;
}

void check_budget(double T, std::int64_t Q, const DistanceOptions& o) {
  const auto cutoff = static_cast<double>(cutoff_of(T));
  // pi(x) > x / log x for x >= 17.
  if (cutoff >= 17 && cutoff / std::log(cutoff) > static_cast<double>(o.max_primes)) {
    throw Error(ErrorCode::kCutoffTooLarge,
                "pi(T) exceeds the prime budget of " + std::to_string(o.max_primes));
  }
  if (grid_work(T, Q, o) > o.max_grid_work) {
    throw Error(ErrorCode::kCutoffTooLarge, "t-grid work exceeds budget");
  }
}

PrimeData load_primes(const MultFnSpec& g, std::int64_t cutoff, const DistanceOptions& o) {
  PrimeData d;
  d.p = primes_in(2, cutoff);
  if (static_cast<std::int64_t>(d.p.size()) > o.max_primes) {
    throw Error(ErrorCode::kCutoffTooLarge,
                "pi(T) = " + std::to_string(d.p.size()) + " exceeds the prime budget");
  }
  d.log_p.reserve(d.p.size());
  d.g.reserve(d.p.size());
  constexpr std::int64_t kChunk = std::int64_t{1} << 20;
  std::size_t next = 0;
  for (std::int64_t lo = 1; lo <= cutoff && next < d.p.size(); lo += kChunk) {
    const std::int64_t len = std::min(kChunk, cutoff - lo + 1);
    const auto values = eval_range(g, lo, len);
    for (; next < d.p.size() && d.p[next] < lo + len; ++next) {
      d.g.push_back(values[static_cast<std::size_t>(d.p[next] - lo)]);
    }
  }
  for (const auto p : d.p) d.log_p.push_back(std::log(static_cast<double>(p)));
  return d;
}

double objective(const PrimeData& d, std::span<const cplx> gchi, double t) {
  long double s = 0;
  for (std::size_t i = 0; i < d.p.size(); ++i) {
    const double angle = t * d.log_p[i];
    const double re = gchi[i].real() * std::cos(angle) - gchi[i].imag() * std::sin(angle);
    s += (1.0L - re) / static_cast<long double>(d.p[i]);
  }
  return static_cast<double>(s);
}

struct Point {
  double value;
  double t;
};

bool better(const Point& a, const Point& b) {
  return std::tuple(a.value, std::abs(a.t), a.t) < std::tuple(b.value, std::abs(b.t), b.t);
}

// Smallest grid-local minima of one block of the t-grid.
std::vector<std::pair<double, std::int64_t>> block_minima(
    const PrimeData& d, std::span<const cplx> weights, double sum_inv, double step,
    std::int64_t j_lo, std::int64_t j_hi, std::int64_t first, std::size_t keep) {
  // Values for j in [first - 1, first + kBlock - 1) so every owned point has
  // both neighbours; owned points are [first, first + kBlock - 2).
  const std::int64_t start = first - 1;
  const auto centre = static_cast<double>(start + static_cast<std::int64_t>(kBlock / 2));
  std::vector<double> x(d.p.size());
  std::vector<cplx> c(d.p.size());
  for (std::size_t i = 0; i < d.p.size(); ++i) {
    x[i] = step * d.log_p[i];
    const double angle = centre * step * d.log_p[i];
    c[i] = weights[i] * cplx(std::cos(angle), std::sin(angle));
  }
  const auto sums = detail::nufft1(x, c, kBlock);
  auto value_at = [&](std::int64_t j) {
    return sum_inv - sums[static_cast<std::size_t>(j - start)].real();
  };
  std::vector<std::pair<double, std::int64_t>> minima;
  const std::int64_t last = std::min(first + static_cast<std::int64_t>(kBlock) - 3, j_hi);
  for (std::int64_t j = first; j <= last; ++j) {
    const double v = value_at(j);
    if ((j == j_lo || v <= value_at(j - 1)) && (j == j_hi || v <= value_at(j + 1))) {
      minima.emplace_back(v, j);
    }
  }
  auto order = [](const auto& a, const auto& b) {
    return std::tuple(a.first, std::abs(a.second), a.second) <
           std::tuple(b.first, std::abs(b.second), b.second);
  };
  if (minima.size() > keep) {
    std::partial_sort(minima.begin(), minima.begin() + static_cast<std::ptrdiff_t>(keep),
                      minima.end(), order);
    minima.resize(keep);
  }
  return minima;
}

Point golden(const PrimeData& d, std::span<const cplx> gchi, double lo, double hi, int iters) {
  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = objective(d, gchi, x1), f2 = objective(d, gchi, x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(d, gchi, x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(d, gchi, x2);
    }
  }
  return f1 <= f2 ? Point{f1, x1} : Point{f2, x2};
}

Point minimize_character(const PrimeData& d, std::span<const cplx> gchi, double step,
                         double t_max, const DistanceOptions& o) {
  double sum_inv = 0;
  std::vector<cplx> weights(d.p.size());
  for (std::size_t i = 0; i < d.p.size(); ++i) {
    sum_inv += 1.0 / static_cast<double>(d.p[i]);
    weights[i] = gchi[i] / static_cast<double>(d.p[i]);
  }
  const auto J = static_cast<std::int64_t>(std::floor(t_max / step));
  const auto keep = static_cast<std::size_t>(std::max(o.candidates, 1));
  std::vector<std::pair<double, std::int64_t>> minima;
  const auto owned = static_cast<std::int64_t>(kBlock) - 2;
  for (std::int64_t first = -J; first <= J; first += owned) {
    auto m = block_minima(d, weights, sum_inv, step, -J, J, first, keep);
    minima.insert(minima.end(), m.begin(), m.end());
  }
  std::sort(minima.begin(), minima.end(), [](const auto& a, const auto& b) {
    return std::tuple(a.first, std::abs(a.second), a.second) <
           std::tuple(b.first, std::abs(b.second), b.second);
  });
  if (minima.size() > keep) minima.resize(keep);

  Point best{objective(d, gchi, 0.0), 0.0};
  for (const auto& [v, j] : minima) {
    const double t = static_cast<double>(j) * step;
    const Point at{objective(d, gchi, t), t};
    if (better(at, best)) best = at;
    const Point refined = golden(d, gchi, std::max(-t_max, t - step),
                                 std::min(t_max, t + step), o.refine_iters);
    if (better(refined, best)) best = refined;
  }
  return best;
}

}  // namespace

DistanceResult pretentious_distance(const MultFnSpec& g, double T, std::int64_t Q,
                                    const DistanceOptions& options) {
  const std::int64_t cutoff = cutoff_of(T);
  if (Q < 1) throw Error(ErrorCode::kInvalidArgument, "distance needs Q >= 1");
  check_budget(T, Q, options);
  const PrimeData d = load_primes(g, cutoff, options);
  const double t_max = options.t_max < 0 ? T : options.t_max;
  const double step = grid_step(T, options);
  const auto chars = characters_up_to(Q);

  std::vector<Point> best(chars.size());
  detail::parallel_for(chars.size(), options.workers, [&](std::size_t c) {
    const CharacterTable chi(chars[c].q, chars[c].index);
    std::vector<cplx> gchi(d.p.size());
    for (std::size_t i = 0; i < d.p.size(); ++i) gchi[i] = d.g[i] * chi(d.p[i]);
    best[c] = minimize_character(d, gchi, step, t_max, options);
  });

  std::size_t win = 0;
  for (std::size_t c = 1; c < chars.size(); ++c) {
    if (better(best[c], best[win])) win = c;
  }
  DistanceResult r;
  r.value_sq = std::max(0.0, best[win].value);
  r.value = std::sqrt(r.value_sq);
  r.argmin_t = best[win].t;
  r.q = chars[win].q;
  r.index = chars[win].index;
  r.prime_cutoff = cutoff;
  r.primes = static_cast<std::int64_t>(d.p.size());
  r.t_grid_step = step;
  r.t_range = t_max;
  r.value_sq_at_zero = objective(d, d.g, 0.0);
  return r;
}

std::vector<DistanceTerm> distance_terms(const MultFnSpec& g, double T, double t,
                                         std::int64_t q, std::int64_t index) {
  const std::int64_t cutoff = cutoff_of(T);
  const DistanceOptions o;
  const PrimeData d = load_primes(g, cutoff, o);
  const CharacterTable chi(q, index);
  std::vector<DistanceTerm> out;
  out.reserve(d.p.size());
  for (std::size_t i = 0; i < d.p.size(); ++i) {
    DistanceTerm term{d.p[i], d.g[i], chi(d.p[i]), 0};
    const double angle = t * d.log_p[i];
    const cplx v = term.g * term.chi * cplx(std::cos(angle), std::sin(angle));
    term.term = (1 - v.real()) / static_cast<double>(d.p[i]);
    out.push_back(term);
  }
  return out;
}

Theorem1Check theorem1_check(const MultFnSpec& g, const PipelineParams& params, double C,
                             const DistanceOptions& options) {
  if (!(C >= 1)) throw Error(ErrorCode::kInvalidArgument, "theorem1_check needs C >= 1");
  validate(params);
  return theorem1_check(g, params, C, build_J1(g, params), options);
}

Theorem1Check theorem1_check(const MultFnSpec& g, const PipelineParams& params, double C,
                             const J1Result& j1, const DistanceOptions& options) {
  if (!(C >= 1)) throw Error(ErrorCode::kInvalidArgument, "theorem1_check needs C >= 1");
  Theorem1Check out;
  out.gate = j1.gate;
  out.mean_sup = j1.mean_sup;
  const auto X = static_cast<double>(params.X);
  const auto H = static_cast<double>(params.H());
  out.T = C * X * X / (H * H);
  out.Q = static_cast<std::int64_t>(std::floor(C));
  DistanceOptions o = options;
  o.workers = std::max(o.workers, params.workers);
  if (!out.gate) {
    try {
      check_budget(out.T, out.Q, o);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCutoffTooLarge) throw;
      out.consistent = true;
      return out;
    }
  }
  out.distance = pretentious_distance(g, out.T, out.Q, o);
  out.distance_computed = true;
  out.consistent = !(out.gate && out.distance.value > C);
  return out;
}

}  // namespace lfu
