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

// Scale lifting: from short-interval frequency data at scale X to a
// configuration at scale X * P^k, then back down to a modulation model
// g(n) ~ e(a n / Q) n^{2 pi i T}.
//
// Levels: level 0 lives at scale X/P with separation ceil(H/P); level L >= 1
// lives at scale X P^{L-1} with separation H P^{L-1}. A link between levels
// L and L+1 records ||p alpha_high - alpha_low|| in units of 1/(H P^L).
//
// Frequencies follow the exponential-sum convention sum g(n) e(alpha n), so a
// function behaving like e(beta n) locally has alpha = -beta. The model
// reports the function-side phase (a, Q, T).

#include <cstdint>
#include <span>
#include <vector>

#include "lfu/approx.hpp"
#include "lfu/circle.hpp"
#include "lfu/gluing.hpp"
#include "lfu/multfn.hpp"

namespace lfu {

struct LiftingConstants {
  int oversample = 8;
  double prime_window = 2.0;  // primes in [P, prime_window * P]
  double c_q = 0.1;           // qualifying primes >= c_q P / log P
  double c_base = 0.01;       // minimum density of level 0
  double c_lift = 1e-3;       // minimum density of lifted levels
  double cluster_const = 4;   // level-0 clustering radius cluster_const * P / H
  double C_link = 4;          // kept links have phase residual <= C_link
  double C_pos = 2;           // and position residual <= C_pos
  double C_eps = 8;           // gluing eps at low level k is C_eps / (H P^k)
  double c_r = 0.05;          // grid points need >= c_r (P / log P)^2 quadruples
  double pair_threshold = 0.05;
  double C2 = 16;
  double C_conc = 100;
  double C_N = 1;             // Vinogradov range N ~ C_N H P^k / X
  double C_v = 4;
  double C_T = 5;             // |T| <= C_T X^2 / H^2
  double C_ver = 4;           // verified entries: within C_ver / H
  int verify_windows = 64;
  int k_tilde_max = 4;
  int k_tilde_override = 0;   // > 0 forces the number of lift steps
};

struct PipelineParams {
  std::int64_t X = 100000;
  double delta_exp = 0.6;
  double eta = 0.5;
  double epsilon = 0.6;
  std::uint64_t seed = 0;
  int workers = 1;
  LiftingConstants k;

  std::int64_t H() const;  // floor(X^delta_exp)
};

// Throws kInvalidArgument unless H >= 10, X >= 4H, H^{epsilon^2} >= 3 and
// P / log P > 1 at the smallest prime scale.
void validate(const PipelineParams& params);

struct ConfigEntry {
  std::int64_t x = 0;
  CirclePoint alpha;
  double magnitude = 0;  // sup magnitude for level 1, 0 above
};

struct Configuration {
  int level = 0;
  std::int64_t lo = 0;  // scale interval [lo, hi)
  std::int64_t hi = 0;
  std::int64_t separation = 1;
  std::vector<ConfigEntry> entries;  // ascending x
  double density = 0;                // |entries| * separation / (hi - lo)
};

struct LinkRecord {
  std::int64_t p = 0;
  std::size_t source = 0;  // index into the lower configuration
  std::size_t target = 0;  // index into the higher configuration
  double pos_residual = 0;    // |p x - z| / target separation
  double phase_residual = 0;  // ||p alpha_z - alpha_x|| * H P^k, k the lower level
};

// Links from the top configuration down to level 1 through a product of primes.
struct CompositeLink {
  std::int64_t product = 1;
  std::vector<std::int64_t> primes;  // top-down order
  std::size_t source = 0;            // level-1 index
  std::size_t target = 0;            // top index
  double pos_residual = 0;    // |q x - z| / top separation, recomputed
  double phase_residual = 0;  // ||q alpha_z - alpha_x|| * H, recomputed
  double pos_bound = 0;       // accumulated by the triangle inequality, same units
  double phase_bound = 0;
};

struct J1Result {
  Configuration config;
  std::vector<double> sups;  // sup magnitude of every scanned window
  double mean_sup = 0;
  bool gate = false;         // mean_sup >= eta H
  double c0 = 0;
};

struct QualifiedEntry {
  std::size_t index = 0;
  std::vector<std::int64_t> primes;
};

struct ScaleSelection {
  std::int64_t P = 0;
  std::vector<std::int64_t> blocks;    // every dyadic P_i tried
  std::vector<double> good_fraction;   // per block
  std::vector<QualifiedEntry> qualified;
};

struct LiftResult {
  Configuration config;
  std::vector<LinkRecord> links;  // source in the lower, target in this config
  std::int64_t grid_points = 0;   // points that met the quadruple threshold
  std::int64_t failures = 0;      // of which concentration failed
};

struct Recursion {
  std::int64_t P = 0;
  int k_tilde = 0;
  int k_tilde_natural = 0;
  bool k_tilde_flagged = false;  // capped or overridden
  std::vector<Configuration> levels;             // levels[L] is level L
  std::vector<std::vector<LinkRecord>> links;    // links[L]: levels L and L+1
  std::vector<CompositeLink> composite;
};

struct ModulationModel {
  std::int64_t a = 0;
  std::int64_t Q = 1;
  double T = 0;
  std::int64_t anchor = 0;
  std::size_t top_index = 0;
  CirclePoint alpha_top;
  RationalApprox approx;
  std::int64_t N = 0;
  double eps_v = 0;
  double delta_v = 0;
  double witness_fraction = 0;  // differences q_j - q_1 with ||.|| < eps_v
  std::int64_t anchors = 0;
  std::int64_t anchor_sources = 0;
  bool T_within_bound = false;
  double quality = 0;  // filled from verify_model
};

struct VerifyReport {
  std::int64_t linked = 0;
  std::int64_t verified = 0;
  double fraction = 0;
  std::int64_t H_star = 0;
  std::vector<std::int64_t> window_starts;
  std::vector<double> correlations;
  double correlated_fraction = 0;  // windows with correlation >= 0.9
};

J1Result build_J1(const MultFnSpec& g, const PipelineParams& params);

// Throws kPreconditionViolated for an empty J1 and kNoQualifyingScale.
ScaleSelection select_prime_scale(const MultFnSpec& g, const Configuration& J1,
                                  const PipelineParams& params);

// Level 0 from the qualified (entry, prime) pairs. Throws kDensityCollapse.
LiftResult build_J0(const Configuration& J1, const ScaleSelection& selection,
                    const PipelineParams& params);

LiftResult lift_step(const Configuration& low, const Configuration& high,
                     std::span<const LinkRecord> links, std::int64_t P,
                     const PipelineParams& params);

// Smallest k >= 1 with P^k / (log P)^{k+1} > X/H, plus one.
int natural_k_tilde(std::int64_t P, std::int64_t X, std::int64_t H);

std::vector<CompositeLink> compose_links(std::span<const Configuration> levels,
                                         std::span<const std::vector<LinkRecord>> links,
                                         std::int64_t H);

// Levels above 1 from J1 and a scale selection; g is not consulted.
Recursion run_recursion_from(const Configuration& J1, const ScaleSelection& selection,
                             const PipelineParams& params);
// Throws kGateFailed (stage "scan") when the gate fails.
Recursion run_recursion(const MultFnSpec& g, const PipelineParams& params);

struct ProductCount {
  std::int64_t count = 0;       // ordered 2k-tuples
  std::int64_t diagonal = 0;    // tuples whose halves are equal as tuples
  double tolerance = 0;         // bound_const * P^k / N
  double bound = 0;             // P^{2k} / (N (log P)^{2k}) * (1/phi(Q) + 1/log N)
  bool in_regime = true;        // P^{k-1} >= N / bound_const
  std::int64_t primes = 0;
};

// Ordered 2k-tuples of primes in [P, 2P] whose two k-fold products differ by
// at most the tolerance and agree mod Q. Throws kTooManyTuples beyond 10^9
// k-tuples.
ProductCount count_close_products(std::int64_t P, int k, std::int64_t N, std::int64_t Q,
                                  double bound_const);

ModulationModel recover_modulation(const Configuration& top,
                                   std::span<const CompositeLink> links,
                                   const Configuration& J1, std::int64_t P, int k_tilde,
                                   const PipelineParams& params);

VerifyReport verify_model(const MultFnSpec& g, const Configuration& J1,
                          std::span<const CompositeLink> links, const ModulationModel& model,
                          const PipelineParams& params);

}  // namespace lfu
