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

#include "lfu/run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <cmath>

#include "lfu/error.hpp"
#include "text_util.hpp"

namespace lfu {
namespace {

const std::vector<std::string> kStages = {"sieve",    "scan",     "peaks", "glue-demo",
                                          "products", "pipeline", "distance", "check"};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorCode::kConfig, "config key '" + std::string(key) + "': expected " +
                                      std::string(want) + ", got '" + std::string(value) + "'");
}

std::int64_t as_int(std::string_view key, std::string_view v) {
  const auto r = parse_int64(v);
  if (!r) bad_value(key, v, "an integer");
  return *r;
}

double as_real(std::string_view key, std::string_view v) {
  const auto r = parse_double(v);
  if (!r || !std::isfinite(*r)) bad_value(key, v, "a finite real");
  return *r;
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true or false");
}

int as_small_int(std::string_view key, std::string_view v) {
  const auto r = as_int(key, v);
  if (r < 0 || r > 1 << 20) bad_value(key, v, "an integer in [0, 2^20]");
  return static_cast<int>(r);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    auto add = [&](std::string key, auto set, auto get) {
      t.push_back({key, Field{[key, set](RunConfig& c, std::string_view v) { set(key, c, v); },
                              get}});
    };
    add("stage",
        [](auto key, RunConfig& c, std::string_view v) {
          if (std::find(kStages.begin(), kStages.end(), v) == kStages.end()) {
            bad_value(key, v, "a stage name");
          }
          c.stage = v;
        },
        [](const RunConfig& c) { return c.stage; });
    add("fn",
        [](auto key, RunConfig& c, std::string_view v) {
          try {
            c.fn = to_string(parse_multfn(v));
          } catch (const Error& e) {
            throw Error(ErrorCode::kParse, std::string("config key '") + key + "': " + e.what());
          }
        },
        [](const RunConfig& c) { return c.fn; });
    add("X", [](auto key, RunConfig& c, auto v) { c.params.X = as_int(key, v); },
        [](const RunConfig& c) { return std::to_string(c.params.X); });
    add("delta", [](auto key, RunConfig& c, auto v) { c.params.delta_exp = as_real(key, v); },
        [](const RunConfig& c) { return format_shortest(c.params.delta_exp); });
    add("eta", [](auto key, RunConfig& c, auto v) { c.params.eta = as_real(key, v); },
        [](const RunConfig& c) { return format_shortest(c.params.eta); });
    add("epsilon", [](auto key, RunConfig& c, auto v) { c.params.epsilon = as_real(key, v); },
        [](const RunConfig& c) { return format_shortest(c.params.epsilon); });
    add("seed",
        [](auto key, RunConfig& c, auto v) {
          const auto r = parse_uint64(v);
          if (!r) bad_value(key, v, "an unsigned integer");
          c.params.seed = *r;
        },
        [](const RunConfig& c) { return std::to_string(c.params.seed); });
    add("workers",
        [](auto key, RunConfig& c, auto v) {
          c.params.workers = std::max(1, as_small_int(key, v));
        },
        [](const RunConfig& c) { return std::to_string(c.params.workers); });
    add("k_tilde",
        [](auto key, RunConfig& c, auto v) {
          c.params.k.k_tilde_override = as_small_int(key, v);
        },
        [](const RunConfig& c) { return std::to_string(c.params.k.k_tilde_override); });
    add("out", [](auto, RunConfig& c, auto v) { c.out = v; },
        [](const RunConfig& c) { return c.out; });
    add("resume", [](auto, RunConfig& c, auto v) { c.resume = v; },
        [](const RunConfig& c) { return c.resume; });
    add("oracles", [](auto key, RunConfig& c, auto v) { c.oracles = as_bool(key, v); },
        [](const RunConfig& c) { return fmt_bool(c.oracles); });
    add("terms", [](auto key, RunConfig& c, auto v) { c.terms = as_bool(key, v); },
        [](const RunConfig& c) { return fmt_bool(c.terms); });
    add("C", [](auto key, RunConfig& c, auto v) { c.C = as_real(key, v); },
        [](const RunConfig& c) { return format_shortest(c.C); });
    add("T", [](auto key, RunConfig& c, auto v) { c.T = as_real(key, v); },
        [](const RunConfig& c) { return format_shortest(c.T); });
    auto int_key = [&](const char* name, std::int64_t RunConfig::*m) {
      add(name, [m](auto key, RunConfig& c, auto v) { c.*m = as_int(key, v); },
          [m](const RunConfig& c) { return std::to_string(c.*m); });
    };
    int_key("Q", &RunConfig::Q);
    int_key("lo", &RunConfig::lo);
    int_key("hi", &RunConfig::hi);
    int_key("x", &RunConfig::x);
    add("tau", [](auto key, RunConfig& c, auto v) { c.tau = as_real(key, v); },
        [](const RunConfig& c) { return format_shortest(c.tau); });
    int_key("P", &RunConfig::P);
    int_key("k", &RunConfig::k);
    int_key("N", &RunConfig::N);
    int_key("count", &RunConfig::count);
    return t;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& [name, f] : fields()) {
    if (name == key) return f;
  }
  throw Error(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
  return to_string(a) == to_string(b);
}

RunConfig default_run_config() {
  RunConfig c;
  if (const char* env = std::getenv("LFU_WORKERS"); env != nullptr && *env != '\0') {
    const auto w = parse_int64(env);
    if (!w || *w < 1 || *w > 1024) {
      throw Error(ErrorCode::kConfig, std::string("LFU_WORKERS: expected 1..1024, got '") +
                                          env + "'");
    }
    c.params.workers = static_cast<int>(*w);
  }
  return c;
}

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_key(RunConfig& config, std::string_view key, std::string_view value) {
  field(trim(key)).set(config, trim(value));
}

std::string get_key(const RunConfig& config, std::string_view key) {
  return field(key).get(config);
}

void apply_run_config(RunConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_key(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig c = default_run_config();
  apply_run_config(c, text);
  return c;
}

std::string to_string(const RunConfig& config) {
  std::string out;
  for (const auto& [name, f] : fields()) out += name + " = " + f.get(config) + "\n";
  return out;
}

}  // namespace lfu
