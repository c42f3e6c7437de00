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

#include "lfu/run.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lfu/error.hpp"
#include "lfu/expsum.hpp"
#include "lfu/gluing.hpp"
#include "lfu/pretend.hpp"
#include "lfu/primes.hpp"
#include "text_util.hpp"

namespace lfu {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest round-trip text, with ".0" on integral values.
std::string real(double v) {
  std::string s = format_shortest(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

class Report {
 public:
  Report& add(std::string_view key, const std::string& value) {
    text_ += std::string(key) + ": " + value + "\n";
    return *this;
  }
  Report& add(std::string_view key, double value) { return add(key, real(value)); }
  Report& add(std::string_view key, std::int64_t value) { return add(key, std::to_string(value)); }
  Report& add(std::string_view key, bool value) { return add(key, std::string(value ? "true" : "false")); }
  Report& raw(const std::string& text) {
    text_ += text;
    return *this;
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

template <typename F>
auto tagged(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw Error(e.code(), e.what(), stage);
  }
}

fs::path out_dir(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  if (c.stage == "pipeline" || c.stage == "check") return "lfu_out";
  return {};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kConfig, message);
}

// ---- pipeline ---------------------------------------------------------------

struct PipelineRun {
  MultFnSpec g;
  PipelineParams params;
  fs::path dir;
  Manifest manifest;
  PipelineOutcome out;

  bool done(std::string_view stage) const {
    return std::find(manifest.stages.begin(), manifest.stages.end(), stage) != manifest.stages.end();
  }

  void finish(const std::string& stage, const std::vector<std::string>& files) {
    if (dir.empty()) return;
    for (const auto& f : files) {
      if (std::find(out.files.begin(), out.files.end(), f) == out.files.end()) out.files.push_back(f);
    }
    manifest.stages.push_back(stage);
    write_manifest(dir, manifest);
  }

  void run() {
    if (!dir.empty()) {
      write_manifest(dir, manifest);
      out.files.push_back("manifest.json");
    }
    const std::int64_t H = params.H();

    if (done("scan")) {
      out.j1 = read_scan(dir);
      out.loaded.push_back("scan");
    } else {
      out.j1 = tagged("scan", [&] { return build_J1(g, params); });
      finish("scan", dir.empty() ? std::vector<std::string>{} : write_scan(dir, out.j1));
    }
    if (!out.j1.gate) {
      throw Error(ErrorCode::kGateFailed,
                  "mean sup " + real(out.j1.mean_sup) + " below eta*H = " +
                      real(params.eta * static_cast<double>(H)),
                  "scan");
    }

    if (done("scale")) {
      out.scale = read_scale(dir);
      out.loaded.push_back("scale");
    } else {
      out.scale = tagged("scale", [&] { return select_prime_scale(g, out.j1.config, params); });
      finish("scale", dir.empty() ? std::vector<std::string>{} : write_scale(dir, out.scale));
    }

    if (done("lift")) {
      out.recursion = read_recursion(dir, H);
      out.loaded.push_back("lift");
    } else {
      out.recursion = run_recursion_from(out.j1.config, out.scale, params);
      finish("lift", dir.empty() ? std::vector<std::string>{} : write_recursion(dir, out.recursion));
    }

    const Configuration& J1 = out.recursion.levels.at(1);
    if (done("model")) {
      out.model = read_model(dir);
      out.loaded.push_back("model");
    } else {
      out.model = tagged("model", [&] {
        return recover_modulation(out.recursion.levels.back(), out.recursion.composite, J1,
                                  out.recursion.P, out.recursion.k_tilde, params);
      });
      finish("model", dir.empty() ? std::vector<std::string>{} : write_model(dir, out.model, nullptr));
    }

    out.verify = tagged("verify", [&] {
      return verify_model(g, J1, out.recursion.composite, out.model, params);
    });
    out.model.quality = out.verify.fraction;
    finish("verify", dir.empty() ? std::vector<std::string>{} : write_model(dir, out.model, &out.verify));
  }
};

void model_report(Report& r, const PipelineOutcome& o) {
  r.add("P", o.recursion.P)
      .add("k_tilde", static_cast<std::int64_t>(o.recursion.k_tilde))
      .add("k_tilde_flagged", o.recursion.k_tilde_flagged)
      .add("top_entries", static_cast<std::int64_t>(o.recursion.levels.back().entries.size()))
      .add("composite_links", static_cast<std::int64_t>(o.recursion.composite.size()))
      .add("a", o.model.a)
      .add("Q", o.model.Q)
      .add("T", o.model.T)
      .add("t_pretender", -2 * std::numbers::pi * o.model.T)
      .add("T_within_bound", o.model.T_within_bound)
      .add("verified_fraction", o.verify.fraction)
      .add("correlated_fraction", o.verify.correlated_fraction);
}

// ---- small stages -------------------------------------------------------------

RunOutcome stage_sieve(const RunConfig& c, const fs::path& dir) {
  const std::int64_t lo = std::max<std::int64_t>(c.lo, 2);
  const auto primes = lo <= c.hi ? primes_in(lo, c.hi) : std::vector<std::int64_t>{};
  Report r;
  r.add("lo", c.lo).add("hi", c.hi).add("count", static_cast<std::int64_t>(primes.size()));
  if (!primes.empty()) r.add("first", primes.front()).add("last", primes.back());
  r.add("sum_inverse", lo <= c.hi ? mertens_sum(lo, c.hi) : 0.0);
  RunOutcome out{r.text(), {}, dir};
  if (!dir.empty()) {
    std::string csv = csv_header("primes", timestamp_utc()) + "\np\n";
    for (const auto p : primes) csv += std::to_string(p) + "\n";
    write_file(dir / "primes.csv", csv);
    out.files.push_back("primes.csv");
  }
  return out;
}

RunOutcome stage_scan(const RunConfig& c, const MultFnSpec& g, const fs::path& dir) {
  const J1Result j1 = build_J1(g, c.params);
  const std::int64_t H = c.params.H();
  Report r;
  r.add("fn", c.fn).add("X", c.params.X).add("H", H)
      .add("windows", static_cast<std::int64_t>(j1.sups.size()))
      .add("mean_sup", j1.mean_sup)
      .add("threshold", c.params.eta * static_cast<double>(H))
      .add("gate", std::string(j1.gate ? "PASSED" : "FAILED"))
      .add("entries", static_cast<std::int64_t>(j1.config.entries.size()))
      .add("density", j1.config.density);
  if (c.oracles) {
    // Dense direct evaluation on the first windows, independent of the FFT path.
    double worst = 0;
    const std::size_t n = std::min<std::size_t>(8, j1.sups.size());
    for (std::size_t w = 0; w < n; ++w) {
      const std::int64_t x = c.params.X + static_cast<std::int64_t>(w) * H;
      const auto values = eval_range(g, x + 1, H);
      double best = 0;
      const std::int64_t grid = 32 * H;
      for (std::int64_t i = 0; i < grid; ++i) {
        best = std::max(best, trig_poly_abs(values, static_cast<double>(i) / static_cast<double>(grid)));
      }
      worst = std::max(worst, (best - j1.sups[w]) / std::max(best, 1e-300));
    }
    r.add("oracle_windows", static_cast<std::int64_t>(n)).add("oracle_max_rel_excess", worst);
  }
  RunOutcome out{r.text(), {}, dir};
  if (!dir.empty()) out.files = write_scan(dir, j1);
  return out;
}

RunOutcome stage_peaks(const RunConfig& c, const MultFnSpec& g, const fs::path& dir) {
  const std::int64_t x = c.x > 0 ? c.x : c.params.X;
  const std::int64_t H = c.params.H();
  const PeakReport pr = detect_peaks(g, x, H, c.tau);
  Report r;
  r.add("fn", c.fn).add("x", x).add("H", H).add("tau", c.tau)
      .add("separation", pr.separation)
      .add("peaks", static_cast<std::int64_t>(pr.peaks.size()));
  std::string table = "alpha,magnitude\n";
  for (const auto& p : pr.peaks) table += to_string(p.alpha) + "," + real(p.magnitude) + "\n";
  r.raw(table);
  if (c.oracles) {
    const auto values = eval_range(g, x + 1, H);
    double worst = 0;
    for (const auto& p : pr.peaks) {
      worst = std::max(worst, std::abs(trig_poly_abs(values, p.alpha.value()) - p.magnitude));
    }
    r.add("oracle_max_abs_gap", worst);
  }
  RunOutcome out{r.text(), {}, dir};
  if (!dir.empty()) {
    write_file(dir / "peaks.csv", csv_header("peaks", timestamp_utc()) + "\n" + table);
    out.files.push_back("peaks.csv");
  }
  return out;
}

RunOutcome stage_glue(const RunConfig& c, const fs::path& dir) {
  std::mt19937_64 rng(c.params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double P = static_cast<double>(c.P);
  const double eps = 1.0 / (400 * P * P);
  auto primes = primes_in(c.P, 2 * c.P);
  if (static_cast<std::int64_t>(primes.size()) > c.count) primes.resize(static_cast<std::size_t>(c.count));
  const double alpha = unit(rng);
  std::vector<PhasedPrime> S;
  // |noise| <= (eps / 10) / (4 pmax) keeps every pairwise relation below eps / 10.
  const double pmax = primes.empty() ? 1.0 : static_cast<double>(primes.back());
  for (const auto p : primes) {
    const double noise = (2 * unit(rng) - 1) * eps / (40 * pmax);
    const double v = frac_mul(p, alpha) + noise;
    S.push_back({p, CirclePoint::real(v - std::floor(v))});
  }
  const auto res = tagged("glue-demo", [&] { return concentrate(S, eps, P, 0.05); });
  const double err = circ_dist(res.alpha, CirclePoint::real(alpha));
  Report r;
  r.add("P", c.P).add("primes", static_cast<std::int64_t>(S.size())).add("eps", eps)
      .add("alpha_planted", alpha).add("alpha_recovered", res.alpha.value())
      .add("error", err).add("error_bound", 10 * eps / P)
      .add("recovered", err <= 10 * eps / P)
      .add("matched", static_cast<std::int64_t>(res.matched.size()))
      .add("pair", std::to_string(res.p1) + "," + std::to_string(res.p2));
  RunOutcome out{r.text(), {}, dir};
  if (!dir.empty()) {
    std::vector<std::string> lines;
    std::string text = jsonl_header("glue-demo", timestamp_utc()) + "\n";
    for (const auto& s : S) text += json{{"p", s.p}, {"alpha", to_string(s.alpha)}}.dump() + "\n";
    text += json{{"record", "result"}, {"alpha", to_string(res.alpha)}, {"error", err},
                 {"matched", res.matched}, {"p1", res.p1}, {"p2", res.p2}}.dump() + "\n";
    write_file(dir / "glue.jsonl", text);
    out.files.push_back("glue.jsonl");
  }
  return out;
}

RunOutcome stage_products(const RunConfig& c, const fs::path& dir) {
  const ProductCount pc = count_close_products(c.P, static_cast<int>(c.k), c.N, c.Q, 1.0);
  Report r;
  r.add("P", c.P).add("k", c.k).add("N", c.N).add("Q", c.Q)
      .add("primes", pc.primes).add("count", pc.count).add("diagonal", pc.diagonal)
      .add("tolerance", pc.tolerance).add("bound", pc.bound)
      .add("ratio", static_cast<double>(pc.count) / pc.bound).add("in_regime", pc.in_regime);
  RunOutcome out{r.text(), {}, dir};
  if (!dir.empty()) {
    json j = {{"schema_version", kSchemaVersion}, {"P", c.P}, {"k", c.k}, {"N", c.N}, {"Q", c.Q},
              {"primes", pc.primes}, {"count", pc.count}, {"diagonal", pc.diagonal},
              {"tolerance", pc.tolerance}, {"bound", pc.bound}, {"in_regime", pc.in_regime}};
    write_file(dir / "products.json", json_document(j.dump(2), timestamp_utc()));
    out.files.push_back("products.json");
  }
  return out;
}

RunOutcome stage_distance(const RunConfig& c, const MultFnSpec& g, const fs::path& dir) {
  DistanceOptions o;
  o.workers = c.params.workers;
  const DistanceResult d = pretentious_distance(g, c.T, c.Q, o);
  Report r;
  r.add("value", d.value).add("value_sq", d.value_sq).add("argmin_t", d.argmin_t)
      .add("argmin_character", std::to_string(d.q) + "," + std::to_string(d.index))
      .add("prime_cutoff", d.prime_cutoff).add("primes", d.primes)
      .add("t_grid_step", d.t_grid_step).add("value_sq_at_t0", d.value_sq_at_zero);
  std::string table;
  if (c.terms || !dir.empty()) {
    table = "p,g_re,g_im,chi_re,chi_im,term\n";
    for (const auto& t : distance_terms(g, c.T, d.argmin_t, d.q, d.index)) {
      table += std::to_string(t.p) + "," + real(t.g.real()) + "," + real(t.g.imag()) + "," +
               real(t.chi.real()) + "," + real(t.chi.imag()) + "," + real(t.term) + "\n";
    }
  }
  if (c.terms) r.raw(table);
  RunOutcome out{r.text(), {}, dir};
  if (!dir.empty()) {
    write_file(dir / "distance.csv", csv_header("distance", timestamp_utc()) + "\n" + table);
    out.files.push_back("distance.csv");
  }
  return out;
}

RunOutcome stage_pipeline(const RunConfig& c, const fs::path& dir) {
  const PipelineOutcome o = c.resume.empty() ? run_pipeline(c, dir)
                                             : resume_pipeline(c.resume, c.params.workers);
  Report r;
  r.add("fn", o.fn);
  if (!o.loaded.empty()) {
    std::string s;
    for (const auto& l : o.loaded) s += (s.empty() ? "" : ",") + l;
    r.add("loaded_stages", s);
  }
  r.add("gate", std::string("PASSED")).add("mean_sup", o.j1.mean_sup);
  model_report(r, o);
  return {r.text(), o.files, c.resume.empty() ? dir : fs::path(c.resume)};
}

RunOutcome stage_check(const RunConfig& c, const MultFnSpec& g, const fs::path& dir) {
  Report r;
  r.add("fn", c.fn);
  std::vector<std::string> files;
  J1Result j1;
  bool have_model = false;
  PipelineOutcome o;
  try {
    o = run_pipeline(c, dir);
    j1 = o.j1;
    have_model = true;
    files = o.files;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kGateFailed) throw;
    j1 = read_scan(dir);
    files = {"manifest.json", "J1.jsonl", "scan.csv"};
  }
  DistanceOptions opts;
  opts.workers = c.params.workers;
  const Theorem1Check t = tagged("distance", [&] { return theorem1_check(g, c.params, c.C, j1, opts); });
  r.add("gate", std::string(t.gate ? "PASSED" : "FAILED")).add("mean_sup", t.mean_sup)
      .add("threshold", c.params.eta * static_cast<double>(c.params.H()));
  if (have_model) model_report(r, o);
  r.add("distance_T", t.T).add("distance_Q", t.Q).add("distance_computed", t.distance_computed);
  if (t.distance_computed) {
    r.add("distance", t.distance.value).add("distance_argmin_t", t.distance.argmin_t)
        .add("distance_character", std::to_string(t.distance.q) + "," + std::to_string(t.distance.index));
  }
  r.add("consistent", t.consistent);

  json j = {{"schema_version", kSchemaVersion}, {"fn", c.fn}, {"C", c.C}, {"gate", t.gate},
            {"mean_sup", t.mean_sup}, {"distance_T", t.T}, {"distance_Q", t.Q},
            {"distance_computed", t.distance_computed}, {"consistent", t.consistent}};
  if (t.distance_computed) {
    j["distance"] = {{"value", t.distance.value}, {"value_sq", t.distance.value_sq},
                     {"argmin_t", t.distance.argmin_t}, {"q", t.distance.q},
                     {"index", t.distance.index}, {"prime_cutoff", t.distance.prime_cutoff},
                     {"t_grid_step", t.distance.t_grid_step},
                     {"value_sq_at_t0", t.distance.value_sq_at_zero}};
  }
  if (have_model) {
    j["model"] = {{"a", o.model.a}, {"Q", o.model.Q}, {"T", o.model.T},
                  {"verified_fraction", o.verify.fraction}};
  }
  write_file(dir / "check.json", json_document(j.dump(2), timestamp_utc()));
  files.push_back("check.json");
  return {r.text(), files, dir};
}

}  // namespace

void check_config(const RunConfig& c) {
  MultFnSpec g;
  try {
    g = parse_multfn(c.fn);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, std::string("fn: ") + e.what());
  }
  const bool needs_params = c.stage == "scan" || c.stage == "peaks" ||
                            (c.stage == "pipeline" && c.resume.empty()) || c.stage == "check";
  if (needs_params) {
    try {
      validate(c.params);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, e.what());
    }
  }
  if (c.stage == "sieve") require(c.lo >= 1 && c.hi >= c.lo, "sieve needs 1 <= lo <= hi");
  if (c.stage == "peaks") require(c.tau > 0 && c.tau <= 1, "peaks needs 0 < tau <= 1");
  if (c.stage == "glue-demo") require(c.P >= 3 && c.count >= 2, "glue-demo needs P >= 3, count >= 2");
  if (c.stage == "products") {
    require(c.P >= 3 && c.k >= 1 && c.k <= 8 && c.N >= 3 && c.Q >= 1,
            "products needs P >= 3, 1 <= k <= 8, N >= 3, Q >= 1");
  }
  if (c.stage == "distance") require(c.T >= 1 && c.Q >= 1, "distance needs T >= 1, Q >= 1");
  if (c.stage == "check") require(c.C >= 1, "check needs C >= 1");
}

PipelineOutcome run_pipeline(const RunConfig& config, const fs::path& dir) {
  RunConfig canonical = config;
  canonical.stage = "pipeline";
  canonical.out = "";
  canonical.resume = "";
  PipelineRun run{parse_multfn(config.fn), config.params, dir, Manifest{to_string(canonical), {}}, {}};
  run.out.fn = config.fn;
  run.run();
  return std::move(run.out);
}

PipelineOutcome resume_pipeline(const fs::path& dir, int workers) {
  Manifest manifest = read_manifest(dir);
  RunConfig config;
  try {
    config = parse_run_config(manifest.config);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, (dir / "manifest.json").string() + ": " + e.what());
  }
  check_config(config);
  PipelineParams params = config.params;
  if (workers > 0) params.workers = workers;
  // A recorded "verify" means the run finished; redo only the verification.
  std::erase(manifest.stages, "verify");
  PipelineRun run{parse_multfn(config.fn), params, dir, std::move(manifest), {}};
  run.out.fn = config.fn;
  run.run();
  return std::move(run.out);
}

RunOutcome run(const RunConfig& config) {
  check_config(config);
  const MultFnSpec g = parse_multfn(config.fn);
  const fs::path dir = out_dir(config);
  const auto& s = config.stage;
  if (s == "sieve") return tagged("sieve", [&] { return stage_sieve(config, dir); });
  if (s == "scan") return tagged("scan", [&] { return stage_scan(config, g, dir); });
  if (s == "peaks") return tagged("peaks", [&] { return stage_peaks(config, g, dir); });
  if (s == "glue-demo") return tagged("glue-demo", [&] { return stage_glue(config, dir); });
  if (s == "products") return tagged("products", [&] { return stage_products(config, dir); });
  if (s == "distance") return tagged("distance", [&] { return stage_distance(config, g, dir); });
  if (s == "pipeline") return stage_pipeline(config, dir);
  return stage_check(config, g, dir);
}

}  // namespace lfu
