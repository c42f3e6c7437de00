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

// Flat `key = value` run configuration with `#` comments. Keys are listed in
// docs/formats.md; unknown keys and malformed values throw kConfig.

#include <string>
#include <string_view>
#include <vector>

#include "lfu/lifting.hpp"

namespace lfu {

struct RunConfig {
  std::string stage = "pipeline";  // sieve|scan|peaks|glue-demo|products|pipeline|distance|check
  std::string fn = "one";
  PipelineParams params;
  std::string out;      // artifact directory; empty writes nothing (pipeline/check: "lfu_out")
  std::string resume;   // pipeline: resume from this directory
  bool oracles = false; // brute-force cross checks where a stage has one
  bool terms = false;   // distance: per-prime term table
  double C = 5;
  double T = 100;
  std::int64_t Q = 1;
  std::int64_t lo = 2;
  std::int64_t hi = 100;
  std::int64_t x = 0;   // peaks window start, 0 means X
  double tau = 0.5;
  std::int64_t P = 50;
  std::int64_t k = 1;
  std::int64_t N = 10;
  std::int64_t count = 40;  // glue-demo primes

  friend bool operator==(const RunConfig&, const RunConfig&);
};

// Defaults, with the worker count taken from LFU_WORKERS when set.
RunConfig default_run_config();

const std::vector<std::string>& run_config_keys();
void set_key(RunConfig& config, std::string_view key, std::string_view value);
std::string get_key(const RunConfig& config, std::string_view key);

// Starts from default_run_config().
RunConfig parse_run_config(std::string_view text);
void apply_run_config(RunConfig& config, std::string_view text);
// Every key in canonical order; parse_run_config(to_string(c)) == c.
std::string to_string(const RunConfig& config);

}  // namespace lfu
