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

#include "lfu/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "lfu/error.hpp"
#include "lfu/expsum.hpp"
#include "lfu/primes.hpp"
#include "parallel.hpp"

namespace lfu {
namespace {

cplx phase_at(std::int64_t n, const CirclePoint& alpha) {
  if (alpha.is_exact()) {
    const Fraction& f = alpha.fraction();
    return unit_root(static_cast<std::int64_t>(static_cast<i128>(n) * f.num % f.den), f.den);
  }
  return expi2pi(frac_mul(n, alpha.value()));
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t abs_diff(i128 a, i128 b) {
  const i128 d = a > b ? a - b : b - a;
  return static_cast<std::int64_t>(d);
}

double log_ratio_sq(std::int64_t P) {
  const double r = static_cast<double>(P) / std::log(static_cast<double>(P));
  return r * r;
}

GluingConstants relaxed_gluing(const PipelineParams& params) {
  GluingConstants k;
  k.C2 = params.k.C2;
  k.C_conc = params.k.C_conc;
  k.window = params.k.prime_window;
  k.enforce_scale_guards = false;
  return k;
}

double density_of(std::size_t n, std::int64_t sep, std::int64_t lo, std::int64_t hi) {
  return static_cast<double>(n) * static_cast<double>(sep) / static_cast<double>(hi - lo);
}

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
  const i128 v = static_cast<i128>(a) * b;
  if (v > INT64_MAX) throw Error(ErrorCode::kOverflow, "scale exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t PipelineParams::H() const {
  const double v = std::pow(static_cast<double>(X), delta_exp);
  return static_cast<std::int64_t>(std::floor(v * (1 + 1e-12)));
}

void validate(const PipelineParams& params) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidArgument, why); };
  if (params.X < 1) fail("X must be positive");
  if (!(params.delta_exp > 0 && params.delta_exp < 1)) fail("delta must lie in (0, 1)");
  if (!(params.eta > 0 && params.eta <= 1)) fail("eta must lie in (0, 1]");
  if (!(params.epsilon > 0 && params.epsilon < 1)) fail("epsilon must lie in (0, 1)");
  const std::int64_t H = params.H();
  if (H < 10) fail("H = floor(X^delta) must be at least 10");
  if (params.X < 4 * H) fail("X must be at least 4H");
  const double lo = std::pow(static_cast<double>(H), params.epsilon * params.epsilon);
  if (lo < 3) fail("H^(epsilon^2) must be at least 3");
  const double P0 = std::floor(lo);
  if (!(P0 / std::log(P0) > 1)) fail("P / log P must exceed 1");
  if (params.k.prime_window < 1) fail("prime window must be at least 1");
  if (params.k.oversample < 4) fail("oversample must be at least 4");
}

J1Result build_J1(const MultFnSpec& g, const PipelineParams& params) {
  validate(params);
  const std::int64_t X = params.X;
  const std::int64_t H = params.H();
  const std::int64_t windows = X / H;
  J1Result out;
  out.sups.resize(static_cast<std::size_t>(windows));
  std::vector<SupResult> sups(static_cast<std::size_t>(windows));
  const SupOptions opts{params.k.oversample, SupOptions{}.refine_iters};
  // Evaluate in chunks of windows so the sieve cost is shared.
  constexpr std::int64_t kChunk = 64;
  const auto chunks = static_cast<std::size_t>(ceil_div(windows, kChunk));
  detail::parallel_for(chunks, params.workers, [&](std::size_t c) {
    const std::int64_t first = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t last = std::min(windows, first + kChunk);
    const auto values = eval_range(g, X + first * H + 1, (last - first) * H);
    for (std::int64_t w = first; w < last; ++w) {
      const std::span<const cplx> window(values.data() + (w - first) * H,
                                         static_cast<std::size_t>(H));
      sups[static_cast<std::size_t>(w)] = sup_trig_poly(window, opts);
    }
  });
  Configuration& J1 = out.config;
  J1.level = 1;
  J1.lo = X;
  J1.hi = 2 * X;
  J1.separation = H;
  long double total = 0;
  for (std::int64_t w = 0; w < windows; ++w) {
    const auto& s = sups[static_cast<std::size_t>(w)];
    out.sups[static_cast<std::size_t>(w)] = s.magnitude;
    total += s.magnitude;
    if (s.magnitude >= params.eta * static_cast<double>(H) / 2) {
      J1.entries.push_back({X + w * H, s.alpha, s.magnitude});
    }
  }
  out.mean_sup = windows > 0 ? static_cast<double>(total / windows) : 0.0;
  out.gate = out.mean_sup >= params.eta * static_cast<double>(H);
  J1.density = density_of(J1.entries.size(), H, J1.lo, J1.hi);
  out.c0 = J1.density;
  return out;
}

ScaleSelection select_prime_scale(const MultFnSpec& g, const Configuration& J1,
                                  const PipelineParams& params) {
  if (J1.entries.empty()) {
    throw Error(ErrorCode::kPreconditionViolated, "J1 is empty");
  }
  const std::int64_t H = params.H();
  const double top = std::pow(static_cast<double>(H), params.epsilon);
  const auto base = static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(H), params.epsilon * params.epsilon)));
  ScaleSelection sel;
  for (std::int64_t P = base; static_cast<double>(P) <= top; P *= 2) sel.blocks.push_back(P);
  if (sel.blocks.empty()) sel.blocks.push_back(base);

  const std::size_t n = J1.entries.size();
  std::vector<std::vector<cplx>> coeffs(n);
  detail::parallel_for(n, params.workers, [&](std::size_t i) {
    coeffs[i] = eval_range(g, J1.entries[i].x + 1, H);
  });

  const double threshold = params.eta / 4;
  std::vector<std::vector<QualifiedEntry>> per_block;
  for (std::int64_t P : sel.blocks) {
    const auto hi = static_cast<std::int64_t>(std::floor(params.k.prime_window * static_cast<double>(P)));
    const auto primes = primes_in(P, hi);
    const double need = params.k.c_q * static_cast<double>(P) / std::log(static_cast<double>(P));
    std::vector<QualifiedEntry> q(n);
    detail::parallel_for(n, params.workers, [&](std::size_t i) {
      const auto& e = J1.entries[i];
      q[i].index = i;
      for (std::int64_t p : primes) {
        cplx acc{0.0, 0.0};
        for (std::int64_t m = e.x / p + 1; m <= (e.x + H) / p; ++m) {
          const std::int64_t nn = p * m;
          acc += coeffs[i][static_cast<std::size_t>(nn - e.x - 1)] * phase_at(nn, e.alpha);
        }
        if (static_cast<double>(p) / static_cast<double>(H) * std::abs(acc) >= threshold) {
          q[i].primes.push_back(p);
        }
      }
    });
    std::vector<QualifiedEntry> good;
    for (auto& entry : q) {
      if (!entry.primes.empty() && static_cast<double>(entry.primes.size()) >= need) {
        good.push_back(std::move(entry));
      }
    }
    sel.good_fraction.push_back(static_cast<double>(good.size()) / static_cast<double>(n));
    per_block.push_back(std::move(good));
  }
  std::size_t best = 0;
  for (std::size_t b = 1; b < sel.blocks.size(); ++b) {
    if (sel.good_fraction[b] >= sel.good_fraction[best]) best = b;
  }
  if (sel.good_fraction[best] == 0) {
    throw Error(ErrorCode::kNoQualifyingScale, "no dyadic prime block qualifies for any entry");
  }
  sel.P = sel.blocks[best];
  sel.qualified = std::move(per_block[best]);
  return sel;
}

LiftResult build_J0(const Configuration& J1, const ScaleSelection& selection,
                    const PipelineParams& params) {
  const std::int64_t X = params.X;
  const std::int64_t H = params.H();
  const std::int64_t P = selection.P;
  if (P < 2) throw Error(ErrorCode::kPreconditionViolated, "no prime scale selected");
  const double w = params.k.prime_window;
  LiftResult out;
  Configuration& J0 = out.config;
  J0.level = 0;
  J0.separation = ceil_div(H, P);
  J0.lo = static_cast<std::int64_t>(std::floor(static_cast<double>(X) / (w * static_cast<double>(P))));
  J0.hi = ceil_div(2 * X, P) + 2;

  struct Candidate {
    std::size_t entry;
    std::int64_t p;
    CirclePoint freq;
  };
  std::map<std::int64_t, std::vector<Candidate>> bins;
  for (const auto& q : selection.qualified) {
    const auto& e = J1.entries.at(q.index);
    for (std::int64_t p : q.primes) {
      const std::int64_t y = ceil_div(e.x + 1, p);
      if (y < J0.lo || y >= J0.hi) continue;
      bins[(y - J0.lo) / J0.separation].push_back({q.index, p, scale(p, e.alpha)});
    }
  }
  const double radius = params.k.cluster_const * static_cast<double>(P) / static_cast<double>(H);
  for (const auto& [b, cands] : bins) {
    // Frequency with the most candidates inside the clustering radius.
    std::size_t best = 0;
    std::size_t best_support = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      std::size_t support = 0;
      for (const auto& c : cands) support += circ_dist(c.freq, cands[i].freq) <= radius;
      if (support > best_support) {
        best_support = support;
        best = i;
      }
    }
    const std::int64_t y = J0.lo + b * J0.separation + J0.separation / 2;
    const CirclePoint alpha = cands[best].freq;
    std::vector<LinkRecord> links;
    for (const auto& c : cands) {
      if (circ_dist(c.freq, alpha) > radius) continue;
      LinkRecord l;
      l.p = c.p;
      l.source = J0.entries.size();
      l.target = c.entry;
      l.pos_residual = static_cast<double>(abs_diff(static_cast<i128>(c.p) * y, J1.entries[c.entry].x)) /
                       static_cast<double>(J1.separation);
      l.phase_residual = circ_dist(c.freq, alpha) * static_cast<double>(H);
      if (l.phase_residual <= params.k.C_link && l.pos_residual <= params.k.C_pos) links.push_back(l);
    }
    if (links.empty()) continue;
    J0.entries.push_back({y, alpha, 0.0});
    out.links.insert(out.links.end(), links.begin(), links.end());
  }
  J0.density = density_of(J0.entries.size(), J0.separation, J0.lo, J0.hi);
  if (J0.entries.empty() || J0.density < params.k.c_base) {
    throw Error(ErrorCode::kDensityCollapse,
                "level-0 density " + std::to_string(J0.density) + " below " +
                    std::to_string(params.k.c_base));
  }
  return out;
}

LiftResult lift_step(const Configuration& low, const Configuration& high,
                     std::span<const LinkRecord> links, std::int64_t P,
                     const PipelineParams& params) {
  if (high.level != low.level + 1) {
    throw Error(ErrorCode::kPreconditionViolated, "lift_step needs consecutive levels");
  }
  const double w = params.k.prime_window;
  const auto wP = static_cast<std::int64_t>(std::floor(w * static_cast<double>(P)));
  LiftResult out;
  Configuration& top = out.config;
  top.level = low.level + 2;
  top.separation = mul_checked(high.separation, P);
  top.lo = mul_checked(mul_checked(P, P), low.lo);
  top.hi = mul_checked(mul_checked(wP, wP), low.hi);

  std::vector<std::vector<const LinkRecord*>> by_low(low.entries.size());
  for (const auto& l : links) {
    if (l.source >= low.entries.size() || l.target >= high.entries.size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "link index outside its configuration");
    }
    by_low[l.source].push_back(&l);
  }

  struct Bin {
    std::int64_t quadruples = 0;
    std::vector<std::pair<std::int64_t, std::size_t>> family;  // (p, high index)
  };
  std::map<std::int64_t, Bin> bins;
  for (const auto& group : by_low) {
    for (const auto* l1 : group) {
      for (const auto* l2 : group) {
        if (l1->p == l2->p || l1->target == l2->target) continue;
        // z ~ p2 y1 ~ p1 y2 ~ p1 p2 x
        const i128 z = static_cast<i128>(l2->p) * high.entries[l1->target].x;
        if (z < top.lo || z >= top.hi) continue;
        auto& bin = bins[static_cast<std::int64_t>((z - top.lo) / top.separation)];
        ++bin.quadruples;
        bin.family.emplace_back(l2->p, l1->target);
        bin.family.emplace_back(l1->p, l2->target);
      }
    }
  }

  const double need = params.k.c_r * log_ratio_sq(P);
  const double eps = params.k.C_eps / static_cast<double>(high.separation);
  const GluingConstants gk = relaxed_gluing(params);
  for (auto& [b, bin] : bins) {
    if (static_cast<double>(bin.quadruples) < need) continue;
    ++out.grid_points;
    const std::int64_t z = top.lo + b * top.separation + top.separation / 2;
    // Nearest high entry per prime.
    std::sort(bin.family.begin(), bin.family.end());
    bin.family.erase(std::unique(bin.family.begin(), bin.family.end()), bin.family.end());
    std::vector<PhasedPrime> family;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < bin.family.size();) {
      const std::int64_t p = bin.family[i].first;
      std::size_t pick = bin.family[i].second;
      std::int64_t gap = abs_diff(static_cast<i128>(p) * high.entries[pick].x, z);
      for (++i; i < bin.family.size() && bin.family[i].first == p; ++i) {
        const std::size_t y = bin.family[i].second;
        const std::int64_t d = abs_diff(static_cast<i128>(p) * high.entries[y].x, z);
        if (d < gap) {
          gap = d;
          pick = y;
        }
      }
      if (static_cast<double>(gap) <= params.k.C_pos * static_cast<double>(top.separation)) {
        family.push_back({p, high.entries[pick].alpha});
        owner.push_back(pick);
      }
    }
    if (family.size() < 2) {
      ++out.failures;
      continue;
    }
    ConcentrateResult conc;
    try {
      conc = concentrate(family, eps, static_cast<double>(P), params.k.pair_threshold, gk);
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::kInsufficientPairs:
        case ErrorCode::kNoCommonNeighbors:
        case ErrorCode::kConcentrationFailed:
        case ErrorCode::kAmbiguousLifts:
          ++out.failures;
          continue;
        default:
          throw;
      }
    }
    std::vector<LinkRecord> new_links;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (!std::binary_search(conc.matched.begin(), conc.matched.end(), family[i].p)) continue;
      LinkRecord l;
      l.p = family[i].p;
      l.source = owner[i];
      l.target = top.entries.size();
      l.pos_residual = static_cast<double>(abs_diff(static_cast<i128>(l.p) * high.entries[owner[i]].x, z)) /
                       static_cast<double>(top.separation);
      l.phase_residual = circ_dist(scale(l.p, conc.alpha), family[i].alpha) *
                         static_cast<double>(top.separation);
      if (l.phase_residual <= params.k.C_link && l.pos_residual <= params.k.C_pos) {
        new_links.push_back(l);
      }
    }
    if (new_links.size() < 2) {
      ++out.failures;
      continue;
    }
    top.entries.push_back({z, conc.alpha, 0.0});
    out.links.insert(out.links.end(), new_links.begin(), new_links.end());
  }
  top.density = density_of(top.entries.size(), top.separation, top.lo, top.hi);
  if (top.entries.empty() || top.density < params.k.c_lift) {
    throw Error(ErrorCode::kDensityCollapse,
                "level-" + std::to_string(top.level) + " density " + std::to_string(top.density) +
                    " below " + std::to_string(params.k.c_lift) + " (" +
                    std::to_string(top.entries.size()) + " entries)");
  }
  return out;
}

int natural_k_tilde(std::int64_t P, std::int64_t X, std::int64_t H) {
  const double lp = std::log(static_cast<double>(P));
  const double target = static_cast<double>(X) / static_cast<double>(H);
  for (int k = 1; k < 64; ++k) {
    const double v = k * std::log(static_cast<double>(P)) - (k + 1) * std::log(lp);
    if (v > std::log(target)) return k + 1;
  }
  throw Error(ErrorCode::kInvalidArgument, "P / log P too small for the recursion to terminate");
}

std::vector<CompositeLink> compose_links(std::span<const Configuration> levels,
                                         std::span<const std::vector<LinkRecord>> links,
                                         std::int64_t H) {
  if (levels.size() < 2) throw Error(ErrorCode::kPreconditionViolated, "need levels 0 and 1");
  struct Reach {
    std::size_t source;
    std::vector<std::int64_t> primes;
    double pos = 0;    // absolute
    double phase = 0;  // absolute
  };
  // reach[i]: product -> best path from entry i of the current level to level 1.
  std::vector<std::map<std::int64_t, Reach>> reach(levels[1].entries.size());
  for (std::size_t i = 0; i < reach.size(); ++i) reach[i].emplace(1, Reach{i, {}, 0, 0});

  for (std::size_t L = 2; L < levels.size(); ++L) {
    const auto& lower = levels[L - 1];
    const auto& upper = levels[L];
    std::vector<std::map<std::int64_t, Reach>> next(upper.entries.size());
    for (const auto& l : links[L - 1]) {
      const auto& y = lower.entries[l.source];
      const auto& z = upper.entries[l.target];
      const double pos = static_cast<double>(abs_diff(static_cast<i128>(l.p) * y.x, z.x));
      const double phase = circ_dist(scale(l.p, z.alpha), y.alpha);
      for (const auto& [q, r] : reach[l.source]) {
        const std::int64_t product = mul_checked(q, l.p);
        Reach cand{r.source, {}, static_cast<double>(l.p) * r.pos + pos,
                   static_cast<double>(q) * phase + r.phase};
        cand.primes.push_back(l.p);
        cand.primes.insert(cand.primes.end(), r.primes.begin(), r.primes.end());
        auto [it, inserted] = next[l.target].emplace(product, cand);
        if (!inserted && cand.source < it->second.source) it->second = std::move(cand);
      }
    }
    reach = std::move(next);
  }

  const auto& top = levels.back();
  const auto& J1 = levels[1];
  std::vector<CompositeLink> out;
  for (std::size_t t = 0; t < reach.size(); ++t) {
    for (const auto& [q, r] : reach[t]) {
      CompositeLink c;
      c.product = q;
      c.primes = r.primes;
      c.source = r.source;
      c.target = t;
      const auto& x = J1.entries[r.source];
      const auto& z = top.entries[t];
      const auto S = static_cast<double>(top.separation);
      c.pos_residual = static_cast<double>(abs_diff(static_cast<i128>(q) * x.x, z.x)) / S;
      c.phase_residual = circ_dist(scale(q, z.alpha), x.alpha) * static_cast<double>(H);
      c.pos_bound = r.pos / S;
      c.phase_bound = r.phase * static_cast<double>(H);
      out.push_back(std::move(c));
    }
  }
  return out;
}

Recursion run_recursion_from(const Configuration& J1, const ScaleSelection& selection,
                             const PipelineParams& params) {
  const std::int64_t H = params.H();
  Recursion rec;
  rec.P = selection.P;
  rec.k_tilde_natural = natural_k_tilde(rec.P, params.X, H);
  rec.k_tilde = params.k.k_tilde_override > 0
                    ? params.k.k_tilde_override
                    : std::min(rec.k_tilde_natural, params.k.k_tilde_max);
  rec.k_tilde_flagged = rec.k_tilde != rec.k_tilde_natural;

  LiftResult base;
  try {
    base = build_J0(J1, selection, params);
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), "base");
  }
  rec.levels.push_back(std::move(base.config));
  rec.levels.push_back(J1);
  rec.links.push_back(std::move(base.links));
  for (int s = 0; s < rec.k_tilde; ++s) {
    LiftResult step;
    try {
      step = lift_step(rec.levels[static_cast<std::size_t>(s)],
                       rec.levels[static_cast<std::size_t>(s) + 1],
                       rec.links[static_cast<std::size_t>(s)], rec.P, params);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), "lift" + std::to_string(s + 2));
    }
    rec.levels.push_back(std::move(step.config));
    rec.links.push_back(std::move(step.links));
  }
  rec.composite = compose_links(rec.levels, rec.links, H);
  return rec;
}

Recursion run_recursion(const MultFnSpec& g, const PipelineParams& params) {
  const J1Result j1 = build_J1(g, params);
  if (!j1.gate) {
    throw Error(ErrorCode::kGateFailed,
                "mean sup " + std::to_string(j1.mean_sup) + " below eta H", "scan");
  }
  ScaleSelection sel;
  try {
    sel = select_prime_scale(g, j1.config, params);
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), "scale");
  }
  return run_recursion_from(j1.config, sel, params);
}

ProductCount count_close_products(std::int64_t P, int k, std::int64_t N, std::int64_t Q,
                                  double bound_const) {
  if (k < 1 || P < 3 || N < 3 || Q < 1 || !(bound_const > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "count_close_products needs k >= 1, P >= 3, N >= 3, Q >= 1");
  }
  const auto primes = primes_in(P, 2 * P);
  ProductCount out;
  out.primes = static_cast<std::int64_t>(primes.size());
  const double tuples = std::pow(static_cast<double>(primes.size()), k);
  if (tuples > 1e9) {
    throw Error(ErrorCode::kTooManyTuples,
                std::to_string(primes.size()) + "^" + std::to_string(k) + " tuples exceed 10^9");
  }
  const double Pd = static_cast<double>(P);
  out.tolerance = bound_const * std::pow(Pd, k) / static_cast<double>(N);
  out.in_regime = std::pow(Pd, k - 1) >= static_cast<double>(N) / bound_const;
  out.bound = std::pow(Pd, 2 * k) / (static_cast<double>(N) * std::pow(std::log(Pd), 2 * k)) *
              (1.0 / static_cast<double>(euler_phi(Q)) + 1.0 / std::log(static_cast<double>(N)));
  out.diagonal = static_cast<std::int64_t>(tuples);

  // Multisets of k primes with their number of orderings.
  struct Item {
    std::int64_t product;
    std::int64_t orderings;
  };
  std::vector<Item> items;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  std::int64_t fact_k = 1;
  for (int i = 2; i <= k; ++i) fact_k *= i;
  while (true) {
    std::int64_t prod = 1;
    std::int64_t denom = 1;
    std::int64_t run = 1;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      prod = mul_checked(prod, primes[idx[i]]);
      if (i > 0 && idx[i] == idx[i - 1]) {
        ++run;
        denom *= run;
      } else {
        run = 1;
      }
    }
    items.push_back({prod, fact_k / denom});
    // Next non-decreasing index sequence.
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] + 1 == primes.size()) --pos;
    if (pos < 0) break;
    const std::size_t v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int i = pos; i < k; ++i) idx[static_cast<std::size_t>(i)] = v;
  }

  std::map<std::int64_t, std::vector<Item>> classes;
  for (const auto& it : items) classes[it.product % Q].push_back(it);
  const auto tol = static_cast<std::int64_t>(std::floor(out.tolerance));
  for (auto& [r, cls] : classes) {
    std::sort(cls.begin(), cls.end(), [](const Item& a, const Item& b) { return a.product < b.product; });
    std::vector<std::int64_t> prefix(cls.size() + 1, 0);
    for (std::size_t i = 0; i < cls.size(); ++i) prefix[i + 1] = prefix[i] + cls[i].orderings;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      while (cls[lo].product < cls[i].product - tol) ++lo;
      while (hi < cls.size() && cls[hi].product <= cls[i].product + tol) ++hi;
      out.count += cls[i].orderings * (prefix[hi] - prefix[lo]);
    }
  }
  return out;
}

ModulationModel recover_modulation(const Configuration& top,
                                   std::span<const CompositeLink> links,
                                   const Configuration& J1, std::int64_t P, int k_tilde,
                                   const PipelineParams& params) {
  if (links.empty()) throw Error(ErrorCode::kNoAnchor, "no product links reach level 1");
  const std::int64_t X = params.X;
  const std::int64_t H = params.H();
  std::vector<std::int64_t> per_top(top.entries.size(), 0);
  for (const auto& l : links) ++per_top.at(l.target);
  const auto zi = static_cast<std::size_t>(
      std::max_element(per_top.begin(), per_top.end()) - per_top.begin());
  std::vector<const CompositeLink*> mine;
  for (const auto& l : links) {
    if (l.target == zi) mine.push_back(&l);
  }
  std::sort(mine.begin(), mine.end(),
            [](const CompositeLink* a, const CompositeLink* b) { return a->product < b->product; });

  ModulationModel m;
  m.top_index = zi;
  m.alpha_top = top.entries[zi].alpha;
  const double scale_top = static_cast<double>(H) * std::pow(static_cast<double>(P), k_tilde) /
                           static_cast<double>(X);
  m.N = std::max<std::int64_t>(static_cast<std::int64_t>(std::ceil(params.k.C_N * scale_top)), 1000);
  m.N = std::min<std::int64_t>(m.N, 10'000'000);
  m.eps_v = std::min(1.0 / static_cast<double>(H), 0.002);
  const std::int64_t support = support_count(m.alpha_top, m.N, m.eps_v);
  m.delta_v = std::min(0.99, static_cast<double>(support) / static_cast<double>(m.N));
  std::int64_t witnesses = 0;
  for (const auto* l : mine) {
    witnesses += circ_dist(scale(l->product - mine.front()->product, m.alpha_top), CirclePoint{}) < m.eps_v;
  }
  m.witness_fraction = static_cast<double>(witnesses) / static_cast<double>(mine.size());
  try {
    m.approx = vinogradov_approx(m.alpha_top, m.N, m.eps_v, m.delta_v,
                                 VinogradovOptions{params.k.C_v, true});
  } catch (const Error& e) {
    throw Error(ErrorCode::kVinogradovFailed,
                std::string("rational approximation failed: ") + e.what());
  }
  m.Q = m.approx.q;

  // Anchors: positions q * (x + H/2) of the linked windows, binned finely.
  const auto S = static_cast<double>(top.separation);
  const double width =
      std::max(1.0, S / std::pow(std::log(static_cast<double>(P)), k_tilde));
  std::map<std::int64_t, std::vector<std::pair<double, std::size_t>>> anchors;
  for (const auto* l : mine) {
    const double u = static_cast<double>(l->product) *
                     (static_cast<double>(J1.entries[l->source].x) + static_cast<double>(H) / 2);
    anchors[static_cast<std::int64_t>(std::floor(u / width))].emplace_back(u, l->source);
  }
  m.anchors = static_cast<std::int64_t>(anchors.size());
  const std::vector<std::pair<double, std::size_t>>* best = nullptr;
  std::size_t best_sources = 0;
  for (const auto& [b, members] : anchors) {
    std::vector<std::size_t> src;
    for (const auto& mem : members) src.push_back(mem.second);
    std::sort(src.begin(), src.end());
    const auto distinct = static_cast<std::size_t>(std::unique(src.begin(), src.end()) - src.begin());
    if (distinct > best_sources) {
      best_sources = distinct;
      best = &members;
    }
  }
  if (best == nullptr || best->size() < 2) {
    throw Error(ErrorCode::kNoAnchor, "every anchor has fewer than two products");
  }
  std::vector<double> us;
  for (const auto& mem : *best) us.push_back(mem.first);
  std::sort(us.begin(), us.end());
  const double anchor = us[us.size() / 2];
  m.anchor = static_cast<std::int64_t>(std::llround(anchor));
  m.anchor_sources = static_cast<std::int64_t>(best_sources);

  const double off = signed_offset(m.alpha_top, CirclePoint::exact(m.approx.a, m.approx.q));
  // alpha = -(a/Q + T/z) in the sum convention.
  m.T = -off * anchor;
  m.a = (m.Q - m.approx.a % m.Q) % m.Q;
  m.T_within_bound = std::fabs(m.T) <= params.k.C_T * static_cast<double>(X) * static_cast<double>(X) /
                                           (static_cast<double>(H) * static_cast<double>(H));
  return m;
}

VerifyReport verify_model(const MultFnSpec& g, const Configuration& J1,
                          std::span<const CompositeLink> links, const ModulationModel& model,
                          const PipelineParams& params) {
  const std::int64_t X = params.X;
  const std::int64_t H = params.H();
  VerifyReport rep;
  // (i) each linked level-1 entry, through its best-positioned link.
  std::map<std::size_t, const CompositeLink*> best;
  for (const auto& l : links) {
    auto [it, inserted] = best.emplace(l.source, &l);
    if (!inserted) {
      const auto* cur = it->second;
      if (l.pos_residual < cur->pos_residual ||
          (l.pos_residual == cur->pos_residual && l.product < cur->product)) {
        it->second = &l;
      }
    }
  }
  const double tol = params.k.C_ver / static_cast<double>(H);
  for (const auto& [src, l] : best) {
    const auto& e = J1.entries.at(src);
    const double xc = static_cast<double>(e.x) + static_cast<double>(H) / 2;
    const auto residue = static_cast<std::int64_t>(static_cast<i128>(l->product % model.Q) * model.a % model.Q);
    const CirclePoint predicted =
        add(CirclePoint::exact(residue, model.Q), CirclePoint::real(model.T / xc - std::floor(model.T / xc)));
    const CirclePoint beta = sub(CirclePoint{}, e.alpha);
    ++rep.linked;
    if (circ_dist(beta, predicted) <= tol) ++rep.verified;
  }
  rep.fraction = rep.linked > 0 ? static_cast<double>(rep.verified) / static_cast<double>(rep.linked) : 0.0;

  // (ii) correlation with the model on random windows of length epsilon H.
  rep.H_star = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(params.epsilon * static_cast<double>(H))));
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::int64_t> pick(X, 2 * X - rep.H_star);
  for (int i = 0; i < params.k.verify_windows; ++i) rep.window_starts.push_back(pick(rng));
  rep.correlations.resize(rep.window_starts.size());
  detail::parallel_for(rep.window_starts.size(), params.workers, [&](std::size_t i) {
    const std::int64_t y = rep.window_starts[i];
    const auto values = eval_range(g, y + 1, rep.H_star);
    double best_corr = 0;
    for (std::int64_t ap = 0; ap < model.Q; ++ap) {
      cplx acc{0.0, 0.0};
      for (std::int64_t j = 0; j < rep.H_star; ++j) {
        const std::int64_t n = y + 1 + j;
        const cplx model_phase =
            unit_root(static_cast<std::int64_t>(static_cast<i128>(ap) * n % model.Q), model.Q) *
            expi2pi(model.T * static_cast<double>(n - y) / static_cast<double>(y));
        acc += values[static_cast<std::size_t>(j)] * std::conj(model_phase);
      }
      best_corr = std::max(best_corr, std::abs(acc) / static_cast<double>(rep.H_star));
    }
    rep.correlations[i] = best_corr;
  });
  std::int64_t good = 0;
  for (double c : rep.correlations) good += c >= 0.9;
  rep.correlated_fraction =
      rep.correlations.empty() ? 0.0 : static_cast<double>(good) / static_cast<double>(rep.correlations.size());
  return rep;
}

}  // namespace lfu
