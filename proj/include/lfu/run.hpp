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

// Stage orchestration behind the command-line tool and the C API.

#include <filesystem>
#include <string>
#include <vector>

#include "lfu/io.hpp"
#include "lfu/lifting.hpp"
#include "lfu/run_config.hpp"

namespace lfu {

struct RunOutcome {
  std::string report;              // "key: value" lines, plus tables for some stages
  std::vector<std::string> files;  // artifacts written, relative to the output directory
  std::filesystem::path out_dir;
};

// Validates the configuration (kConfig / kParse) before any stage runs; stage
// errors carry a stage tag.
RunOutcome run(const RunConfig& config);

inline constexpr const char* kPipelineStages[] = {"scan", "scale", "lift", "model", "verify"};

struct PipelineOutcome {
  std::string fn;
  J1Result j1;
  ScaleSelection scale;
  Recursion recursion;
  ModulationModel model;
  VerifyReport verify;
  std::vector<std::string> loaded;  // stages read back from disk instead of computed
  std::vector<std::string> files;
};

// Full pipeline for config.fn / config.params. With a non-empty dir, each
// finished stage writes its artifacts and is recorded in manifest.json.
PipelineOutcome run_pipeline(const RunConfig& config, const std::filesystem::path& dir);
// Continues the run recorded in dir/manifest.json after its last finished stage.
PipelineOutcome resume_pipeline(const std::filesystem::path& dir, int workers = 0);

// Checks that a configuration can run: fn parses, params validate, and
// stage-specific ranges hold. Throws kConfig or kParse.
void check_config(const RunConfig& config);

}  // namespace lfu
