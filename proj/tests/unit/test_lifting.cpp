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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "lfu/error.hpp"
#include "lfu/expsum.hpp"
#include "lfu/lifting.hpp"
#include "lfu/primes.hpp"
#include "oracles.hpp"
#include "planted.hpp"

using lfu::CirclePoint;

namespace {

lfu::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const lfu::Error& e) {
    return e.code();
  }
  return static_cast<lfu::ErrorCode>(0);
}

lfu::PipelineParams desk() {
  lfu::PipelineParams p;
  p.X = 100000;
  p.delta_exp = 0.6;
  p.eta = 0.5;
  return p;
}

// Frequency seen by sum g(n) e(alpha n) for g(n) = e(T log n) near n = x.
CirclePoint twist_frequency(double T, double x) {
  const double v = -T / x;
  return CirclePoint::real(v - std::floor(v));
}

struct ArchRun {
  lfu::PipelineParams params = desk();
  lfu::MultFnSpec g;
  lfu::J1Result j1;
  lfu::Recursion rec;
};

const ArchRun& arch300() {
  static const ArchRun run = [] {
    ArchRun r;
    r.g = lfu::parse_multfn("arch:T=300");
    r.j1 = lfu::build_J1(r.g, r.params);
    r.rec = lfu::run_recursion(r.g, r.params);
    return r;
  }();
  return run;
}

void check_configuration(const lfu::Configuration& c) {
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    CHECK(c.entries[i].x >= c.lo);
    CHECK(c.entries[i].x < c.hi);
    if (i > 0) CHECK(c.entries[i].x - c.entries[i - 1].x >= c.separation);
  }
  const double d = static_cast<double>(c.entries.size()) * static_cast<double>(c.separation) /
                   static_cast<double>(c.hi - c.lo);
  CHECK(c.density == doctest::Approx(d));
}

}  // namespace

TEST_SUITE("lifting") {

TEST_CASE("parameter validation") {
  auto p = desk();
  CHECK_NOTHROW(lfu::validate(p));
  CHECK(p.H() == 1000);
  p.X = 50;
  p.delta_exp = 0.5;  // H = 7
  CHECK(code_of([&] { lfu::validate(p); }) == lfu::ErrorCode::kInvalidArgument);
  p = desk();
  p.delta_exp = 0.9;  // X < 4H
  CHECK(code_of([&] { lfu::validate(p); }) == lfu::ErrorCode::kInvalidArgument);
  p = desk();
  p.epsilon = 0.1;  // H^{eps^2} < 3
  CHECK(code_of([&] { lfu::validate(p); }) == lfu::ErrorCode::kInvalidArgument);
}

TEST_CASE("build_J1 on a planted twist") {
  const auto& run = arch300();
  CHECK(run.j1.gate);
  CHECK(run.j1.c0 >= 0.9);
  check_configuration(run.j1.config);
  // Ten sampled windows against the dense-grid oracle.
  const std::int64_t H = run.params.H();
  for (std::size_t w = 0; w < 100; w += 10) {
    const std::int64_t x = run.params.X + static_cast<std::int64_t>(w) * H;
    const auto coeffs = lfu::eval_range(run.g, x + 1, H);
    const auto dense = oracle::dense_grid(coeffs);
    CHECK(run.j1.sups[w] == doctest::Approx(dense.magnitude).epsilon(0.01));
    CHECK(run.j1.sups[w] >= 0.9 * static_cast<double>(H));
  }
  for (const auto& e : run.j1.config.entries) {
    CHECK(lfu::circ_dist(e.alpha, twist_frequency(300, static_cast<double>(e.x) + 500)) <= 1.0 / 2000);
  }
}

TEST_CASE("build_J1 gate fails for Liouville") {
  lfu::PipelineParams p;
  p.X = 1'000'000;
  p.delta_exp = 0.5;
  p.eta = 0.5;
  const auto j1 = lfu::build_J1(lfu::parse_multfn("liouville"), p);
  CHECK_FALSE(j1.gate);
  CHECK(j1.c0 < 0.05);
  MESSAGE("Liouville mean sup / H = " << j1.mean_sup / 1000 << ", c0 = " << j1.c0);
}

TEST_CASE("build_J1 for the constant function") {
  auto p = desk();
  p.eta = 1.0;
  const auto j1 = lfu::build_J1(lfu::parse_multfn("one"), p);
  CHECK(j1.config.entries.size() == 100);
  for (const auto& e : j1.config.entries) CHECK(lfu::circ_dist(e.alpha, CirclePoint{}) < 1e-6);
}

TEST_CASE("select_prime_scale") {
  const auto& run = arch300();
  const auto sel = lfu::select_prime_scale(run.g, run.j1.config, run.params);
  CHECK(sel.P == sel.blocks.back());
  CHECK(sel.qualified.size() == run.j1.config.entries.size());
  for (const auto& q : sel.qualified) {
    CHECK(q.primes == lfu::primes_in(sel.P, 2 * sel.P));
  }

  // A factor vanishing on every prime of one block.
  const auto masked = lfu::parse_multfn("prod(arch:T=300|mask:lo=24,hi=48)");
  const auto j1m = lfu::build_J1(masked, run.params);
  const auto selm = lfu::select_prime_scale(masked, j1m.config, run.params);
  for (std::size_t b = 0; b < selm.blocks.size(); ++b) {
    if (selm.blocks[b] == 24) CHECK(selm.good_fraction[b] == 0.0);
  }
  CHECK(selm.P != 24);

  CHECK(code_of([&] { lfu::select_prime_scale(run.g, lfu::Configuration{}, run.params); }) ==
        lfu::ErrorCode::kPreconditionViolated);
}

TEST_CASE("build_J0") {
  const auto& run = arch300();
  const auto& J0 = run.rec.levels[0];
  const double P = static_cast<double>(run.rec.P);
  check_configuration(J0);
  CHECK(J0.separation == (1000 + run.rec.P - 1) / run.rec.P);
  for (const auto& e : J0.entries) {
    CHECK(lfu::circ_dist(e.alpha, twist_frequency(300, static_cast<double>(e.x))) <= 4 * P / 1000);
  }
  for (const auto& l : run.rec.links[0]) CHECK(l.phase_residual <= 4 * P);

  // A single level-1 entry yields at most one link per prime.
  lfu::Configuration one = run.j1.config;
  one.entries.resize(1);
  auto sel = lfu::select_prime_scale(run.g, one, run.params);
  auto p = run.params;
  p.k.c_base = 0;
  const auto single = lfu::build_J0(one, sel, p);
  CHECK(single.links.size() <= sel.qualified[0].primes.size());
  CHECK(single.config.entries.size() <= single.links.size());

  CHECK(code_of([&] { lfu::run_recursion(lfu::parse_multfn("liouville"), [] {
          lfu::PipelineParams q;
          q.X = 1'000'000;
          q.delta_exp = 0.5;
          return q;
        }()); }) == lfu::ErrorCode::kGateFailed);
  try {
    lfu::PipelineParams q;
    q.X = 1'000'000;
    q.delta_exp = 0.5;
    lfu::run_recursion(lfu::parse_multfn("liouville"), q);
  } catch (const lfu::Error& e) {
    CHECK(e.stage() == "scan");
  }
}

TEST_CASE("recursion on a planted twist") {
  const auto& run = arch300();
  const auto& rec = run.rec;
  CHECK(rec.k_tilde <= 4);
  CHECK(rec.levels.size() == static_cast<std::size_t>(rec.k_tilde) + 2);
  const double P = static_cast<double>(rec.P);
  const auto& top = rec.levels.back();
  const double XPk = 1e5 * std::pow(P, rec.k_tilde);
  CHECK(static_cast<double>(top.lo) <= XPk);
  CHECK(static_cast<double>(top.hi) >= XPk);
  for (std::size_t L = 0; L < rec.levels.size(); ++L) {
    check_configuration(rec.levels[L]);
    CHECK(rec.levels[L].level == static_cast<int>(L));
    if (L >= 2) CHECK(rec.levels[L].separation == rec.levels[L - 1].separation * rec.P);
  }
  // Level L >= 2 frequencies follow the twist to within C / separation.
  for (std::size_t L = 2; L < rec.levels.size(); ++L) {
    const auto& c = rec.levels[L];
    for (const auto& e : c.entries) {
      CHECK(lfu::circ_dist(e.alpha, twist_frequency(300, static_cast<double>(e.x))) <=
            4.0 / static_cast<double>(c.separation));
    }
  }
  for (const auto& level_links : rec.links) {
    for (const auto& l : level_links) {
      CHECK(std::isfinite(l.phase_residual));
      CHECK(l.phase_residual >= 0);
      CHECK(l.pos_residual >= 0);
    }
  }
}

TEST_CASE("lift_step at P = 10") {
  const auto& run = arch300();
  auto p = run.params;
  p.k.k_tilde_override = 2;
  lfu::ScaleSelection sel;
  sel.P = 10;
  const auto primes = lfu::primes_in(10, 20);
  for (std::size_t i = 0; i < run.j1.config.entries.size(); ++i) sel.qualified.push_back({i, primes});
  const auto rec = lfu::run_recursion_from(run.j1.config, sel, p);
  REQUIRE(rec.levels.size() == 4);
  for (std::size_t L = 2; L < 4; ++L) {
    const auto& c = rec.levels[L];
    CHECK_FALSE(c.entries.empty());
    double worst = 0;
    for (const auto& e : c.entries) {
      worst = std::max(worst, lfu::circ_dist(e.alpha, twist_frequency(300, static_cast<double>(e.x))) *
                                  static_cast<double>(c.separation));
    }
    MESSAGE("level " << L << ": max ||alpha_z - (-T/z)|| * separation = " << worst);
    CHECK(worst <= 4.0);
  }
}

TEST_CASE("degenerate links collapse") {
  const auto& run = arch300();
  const auto& J0 = run.rec.levels[0];
  const auto& J1 = run.rec.levels[1];
  std::vector<lfu::LinkRecord> links;
  for (std::size_t t = 0; t < 5; ++t) links.push_back({53, 0, t, 0.0, 0.0});
  CHECK(code_of([&] { lfu::lift_step(J0, J1, links, run.rec.P, run.params); }) ==
        lfu::ErrorCode::kDensityCollapse);
}

TEST_CASE("zero-noise exact run") {
  const auto p = planted::exact_params();
  const auto J1 = planted::exact_J1(p);
  const auto rec = lfu::run_recursion_from(J1, planted::exact_selection(J1, p), p);
  CHECK(rec.k_tilde == 4);
  CHECK_FALSE(rec.k_tilde_flagged);
  for (const auto& c : rec.levels) {
    CHECK_FALSE(c.entries.empty());
    for (const auto& e : c.entries) {
      REQUIRE(e.alpha.is_exact());
      CHECK(e.alpha == CirclePoint::exact(1, 2));
    }
  }
  for (const auto& level_links : rec.links) {
    for (const auto& l : level_links) CHECK(l.phase_residual == 0.0);
  }
  for (const auto& c : rec.composite) CHECK(c.phase_residual == 0.0);
  const auto m = lfu::recover_modulation(rec.levels.back(), rec.composite, rec.levels[1], rec.P,
                                         rec.k_tilde, p);
  CHECK(m.a == 1);
  CHECK(m.Q == 2);
  CHECK(m.T == 0.0);
  CHECK(m.approx.err == 0.0);
}

TEST_CASE("composite links are sound") {
  const auto& rec = arch300().rec;
  REQUIRE_FALSE(rec.composite.empty());
  std::set<std::pair<std::size_t, std::int64_t>> seen;
  for (const auto& c : rec.composite) {
    CHECK(seen.insert({c.target, c.product}).second);
    CHECK(static_cast<int>(c.primes.size()) == rec.k_tilde);
    CHECK(std::accumulate(c.primes.begin(), c.primes.end(), std::int64_t{1},
                          std::multiplies<>()) == c.product);
    CHECK(c.pos_residual <= c.pos_bound * (1 + 1e-12) + 1e-12);
    CHECK(c.phase_residual <= c.phase_bound * (1 + 1e-9) + 1e-9);
    CHECK(c.pos_residual <= 2 * c.pos_bound + 1e-12);
  }
}

TEST_CASE("count_close_products") {
  const auto hand = lfu::count_close_products(10, 1, 5, 1, 1.0);
  CHECK(hand.tolerance == 2.0);
  CHECK(hand.count == 8);
  CHECK_FALSE(hand.in_regime);
  CHECK(lfu::count_close_products(10, 1, 5, 1000, 1.0).count == 4);

  for (std::int64_t Q : {1, 3}) {
    const auto r = lfu::count_close_products(50, 2, 10, Q, 1.0);
    CHECK(r.in_regime);
    // Brute force over all ordered 4-tuples.
    const auto ps = lfu::primes_in(50, 100);
    std::int64_t brute = 0;
    for (auto a : ps)
      for (auto b : ps)
        for (auto c : ps)
          for (auto d : ps) {
            const std::int64_t u = a * b, v = c * d;
            if (std::llabs(u - v) <= 250 && (u - v) % Q == 0) ++brute;
          }
    CHECK(r.count == brute);
    CHECK((r.count - r.diagonal) % 2 == 0);
    MESSAGE("k = 2, P = 50, N = 10, Q = " << Q << ": count " << r.count << ", bound " << r.bound
                                         << ", ratio " << static_cast<double>(r.count) / r.bound);
    CHECK(static_cast<double>(r.count) <= 5 * r.bound);
  }
  CHECK(code_of([] { lfu::count_close_products(1'000'000, 3, 10, 1, 1.0); }) ==
        lfu::ErrorCode::kTooManyTuples);
  CHECK(code_of([] { lfu::count_close_products(2, 1, 10, 1, 1.0); }) ==
        lfu::ErrorCode::kInvalidArgument);
}

TEST_CASE("recover and verify a planted twist") {
  const auto& run = arch300();
  const auto& rec = run.rec;
  const auto m = lfu::recover_modulation(rec.levels.back(), rec.composite, rec.levels[1], rec.P,
                                         rec.k_tilde, run.params);
  CHECK(m.Q == 1);
  CHECK(m.a == 0);
  CHECK(std::fabs(m.T - 300) <= 5.0 * 1e10 / 1e6);
  CHECK(std::fabs(m.T - 300) <= 10);
  CHECK(m.T_within_bound);
  const auto v = lfu::verify_model(run.g, rec.levels[1], rec.composite, m, run.params);
  CHECK(v.fraction >= 0.9);
  CHECK(v.correlated_fraction >= 0.9);

  auto wrong = m;
  wrong.T += 10 * 1e10 / 1e6;
  const auto vw = lfu::verify_model(run.g, rec.levels[1], rec.composite, wrong, run.params);
  CHECK(vw.fraction < 0.1);

  CHECK(code_of([&] {
          lfu::recover_modulation(rec.levels.back(), {}, rec.levels[1], rec.P, rec.k_tilde, run.params);
        }) == lfu::ErrorCode::kNoAnchor);
}

TEST_CASE("recover a character twist") {
  const auto g = lfu::parse_multfn("prod(char:q=3,k=1|arch:T=200)");
  const auto p = desk();
  const auto rec = lfu::run_recursion(g, p);
  const auto m = lfu::recover_modulation(rec.levels.back(), rec.composite, rec.levels[1], rec.P,
                                         rec.k_tilde, p);
  MESSAGE("character twist: Q = " << m.Q << ", a = " << m.a << ", T = " << m.T);
  CHECK((m.Q == 1 || m.Q == 3));
  CHECK(m.Q == 3);
  CHECK(std::fabs(m.T - 200) <= 5.0 * 1e10 / 1e6);
}

TEST_CASE("verify a perfect model") {
  auto p = desk();
  const auto g = lfu::parse_multfn("one");
  lfu::ModulationModel m;
  const auto v = lfu::verify_model(g, lfu::Configuration{}, {}, m, p);
  REQUIRE(v.correlations.size() == 64);
  for (double c : v.correlations) CHECK(c == 1.0);
  CHECK(v.H_star == 600);
}

}  // TEST_SUITE
