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

// Command-line front end. Links only the C interface in lfu.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lfu/lfu.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStage = 1;
constexpr int kExitConfig = 2;

struct Flag {
  const char* name;  // long flag without dashes
  const char* key;   // configuration key
  const char* help;
};

const std::vector<Flag> kCommon = {
    {"fn", "fn", "multiplicative function spec, e.g. liouville or arch:T=300"},
    {"X", "X", "scale X"},
    {"delta", "delta", "H = floor(X^delta)"},
    {"eta", "eta", "gate threshold: mean sup >= eta H"},
    {"epsilon", "epsilon", "verification window exponent"},
    {"seed", "seed", "random seed"},
    {"workers", "workers", "worker threads (default: LFU_WORKERS or 1)"},
    {"out", "out", "artifact directory"},
    {"oracles", "oracles", "run brute-force cross checks (true/false)"},
};

const std::map<std::string, std::vector<Flag>> kStageFlags = {
    {"sieve", {{"lo", "lo", "range start"}, {"hi", "hi", "range end"}}},
    {"scan", {}},
    {"peaks", {{"x", "x", "window start (default X)"}, {"tau", "tau", "peak threshold"}}},
    {"glue-demo", {{"P", "P", "prime scale"}, {"count", "count", "number of primes"}}},
    {"products",
     {{"P", "P", "prime scale"}, {"k", "k", "product length"}, {"N", "N", "range N"},
      {"Q", "Q", "modulus"}}},
    {"pipeline", {{"k-tilde", "k_tilde", "force the number of lift steps"},
                  {"resume", "resume", "continue the run recorded in this directory"}}},
    {"distance",
     {{"T", "T", "cutoff and t-range"}, {"Q", "Q", "largest character modulus"},
      {"terms", "terms", "print the per-prime table (true/false)"}}},
    {"check", {{"C", "C", "constant C"}, {"k-tilde", "k_tilde", "force the number of lift steps"}}},
};

const char* kDescriptions[][2] = {
    {"sieve", "list primes in [lo, hi]"},
    {"scan", "short-interval sup scan and the large-sup gate"},
    {"peaks", "frequency peaks of one window"},
    {"glue-demo", "planted phase-gluing instance"},
    {"products", "count close prime products"},
    {"pipeline", "scan, lift and recover a modulation model"},
    {"distance", "pretentious distance D(g; T, Q)"},
    {"check", "pipeline plus the distance bound at constant C"},
};

int fail(lfu_status status, bool config_phase) {
  const std::string stage = lfu_last_error_stage();
  std::cerr << "error";
  if (!stage.empty()) std::cerr << " [stage " << stage << "]";
  std::cerr << ": " << lfu_status_name(status) << ": " << lfu_last_error() << "\n";
  if (config_phase || status == LFU_ERR_CONFIG || status == LFU_ERR_PARSE) return kExitConfig;
  return kExitStage;
}

bool read_text(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local Fourier uniformity toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lfu_version()));

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_files;
  std::map<std::string, CLI::App*> subs;
  for (const auto& d : kDescriptions) {
    const std::string name = d[0];
    CLI::App* sub = app.add_subcommand(name, d[1]);
    subs[name] = sub;
    sub->add_option("--config", config_files[name], "key = value configuration file");
    auto add = [&](const Flag& f) {
      sub->add_option(std::string("--") + f.name, values[name][f.key], f.help);
    };
    for (const auto& f : kCommon) add(f);
    for (const auto& f : kStageFlags.at(name)) add(f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::string stage;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) stage = name;
  }
  CLI::App* sub = subs.at(stage);

  lfu_config* config = nullptr;
  if (lfu_status s = lfu_config_new(&config); s != LFU_OK) return fail(s, true);
  struct Free {
    lfu_config* c;
    ~Free() { lfu_config_free(c); }
  } guard{config};

  if (const auto& path = config_files[stage]; !path.empty()) {
    std::string text;
    if (!read_text(path, text)) {
      std::cerr << "error: cannot read config file " << path << "\n";
      return kExitConfig;
    }
    if (lfu_status s = lfu_config_apply(config, text.c_str()); s != LFU_OK) return fail(s, true);
  }
  if (lfu_status s = lfu_config_set(config, "stage", stage.c_str()); s != LFU_OK) {
    return fail(s, true);
  }
  // Flags override the file.
  for (const auto& [key, value] : values[stage]) {
    std::string flag;
    for (const auto* list : {&kCommon, &kStageFlags.at(stage)}) {
      for (const auto& f : *list) {
        if (key == f.key) flag = std::string("--") + f.name;
      }
    }
    if (sub->count(flag) == 0) continue;
    if (lfu_status s = lfu_config_set(config, key.c_str(), value.c_str()); s != LFU_OK) {
      return fail(s, true);
    }
  }

  lfu_report* report = nullptr;
  if (lfu_status s = lfu_run(config, &report); s != LFU_OK) return fail(s, false);
  std::cout << lfu_report_text(report);
  const std::string dir = lfu_report_out_dir(report);
  for (std::size_t i = 0; i < lfu_report_file_count(report); ++i) {
    std::cout << "artifact: " << (dir.empty() ? "" : dir + "/") << lfu_report_file(report, i)
              << "\n";
  }
  lfu_report_free(report);
  return kExitOk;
}
