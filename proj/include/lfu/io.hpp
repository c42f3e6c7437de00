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

// Versioned artifacts. Every file starts with one header line carrying the
// creation time; all later lines are a pure function of the data, so reruns
// compare equal after the first line. Formats are described in docs/formats.md.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lfu/lifting.hpp"

namespace lfu {

inline constexpr int kSchemaVersion = 1;

// UTC, ISO 8601 with seconds.
std::string timestamp_utc();

// Writes through a temporary file and a rename. Throws kIo.
void write_file(const std::filesystem::path& path, std::string_view text);
std::string read_file(const std::filesystem::path& path);

// Header lines (no trailing newline) for the three container types.
std::string jsonl_header(std::string_view kind, std::string_view created);
std::string csv_header(std::string_view kind, std::string_view created);

struct Manifest {
  std::string config;                // canonical run configuration text
  std::vector<std::string> stages;   // completed pipeline stages, in order
};

// Artifact writers return the file names they wrote (relative to dir).
std::vector<std::string> write_manifest(const std::filesystem::path& dir, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& dir);

std::vector<std::string> write_scan(const std::filesystem::path& dir, const J1Result& j1);
J1Result read_scan(const std::filesystem::path& dir);

std::vector<std::string> write_scale(const std::filesystem::path& dir, const ScaleSelection& s);
ScaleSelection read_scale(const std::filesystem::path& dir);

// levels.jsonl, links.jsonl and recursion.json; composite links are rebuilt on read.
std::vector<std::string> write_recursion(const std::filesystem::path& dir, const Recursion& r);
Recursion read_recursion(const std::filesystem::path& dir, std::int64_t H);

// model.json; the verify report (if given) also produces report.csv.
std::vector<std::string> write_model(const std::filesystem::path& dir, const ModulationModel& m,
                                     const VerifyReport* verify);
ModulationModel read_model(const std::filesystem::path& dir);

// A JSON object text with the timestamp on its first line.
std::string json_document(const std::string& body_json, std::string_view created);

}  // namespace lfu
