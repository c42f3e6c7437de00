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

#include "lfu/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lfu/error.hpp"

namespace lfu {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void io_error(const fs::path& path, std::string_view what) {
  throw Error(ErrorCode::kIo, path.string() + ": " + std::string(what));
}

// Lines after the header line.
std::vector<std::string> body_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

json parse_json(const fs::path& path, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    io_error(path, std::string("malformed JSON: ") + e.what());
  }
}

json read_json_document(const fs::path& path) {
  json j = parse_json(path, read_file(path));
  if (j.value("schema_version", 0) != kSchemaVersion) io_error(path, "unsupported schema_version");
  return j;
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::vector<json> out;
  for (const auto& line : body_lines(path)) out.push_back(parse_json(path, line));
  return out;
}

json entry_json(int level, const ConfigEntry& e) {
  return {{"record", "entry"}, {"level", level}, {"x", e.x},
          {"alpha", to_string(e.alpha)}, {"magnitude", e.magnitude}};
}

json level_json(const Configuration& c) {
  return {{"record", "level"}, {"level", c.level},   {"lo", c.lo},
          {"hi", c.hi},        {"separation", c.separation},
          {"density", c.density}, {"entries", c.entries.size()}};
}

Configuration level_from(const json& j) {
  Configuration c;
  c.level = j.at("level").get<int>();
  c.lo = j.at("lo").get<std::int64_t>();
  c.hi = j.at("hi").get<std::int64_t>();
  c.separation = j.at("separation").get<std::int64_t>();
  c.density = j.at("density").get<double>();
  c.entries.reserve(j.at("entries").get<std::size_t>());
  return c;
}

ConfigEntry entry_from(const json& j) {
  return {j.at("x").get<std::int64_t>(), parse_circle_point(j.at("alpha").get<std::string>()),
          j.at("magnitude").get<double>()};
}

std::string jsonl(std::string_view kind, const std::vector<json>& records) {
  std::string out = jsonl_header(kind, timestamp_utc()) + "\n";
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

template <typename F>
auto guarded(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    io_error(path, std::string("unexpected content: ") + e.what());
  }
}

}  // namespace

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) io_error(path, "cannot create directory: " + ec.message());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) io_error(tmp, "cannot open for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) io_error(tmp, "write failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) io_error(path, "rename failed: " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string jsonl_header(std::string_view kind, std::string_view created) {
  return json{{"schema_version", kSchemaVersion}, {"kind", kind}, {"created", created}}.dump();
}

std::string csv_header(std::string_view kind, std::string_view created) {
  return "# schema_version=" + std::to_string(kSchemaVersion) + " kind=" + std::string(kind) +
         " created=" + std::string(created);
}

std::string json_document(const std::string& body_json, std::string_view created) {
  // body_json is "{\n  ...\n}"; put the timestamp alone on the first line.
  std::string out = "{\"created\": " + json(created).dump() + ",\n";
  if (body_json.size() <= 3) return out.substr(0, out.size() - 2) + "}\n";
  return out + body_json.substr(2) + "\n";
}

std::vector<std::string> write_manifest(const fs::path& dir, const Manifest& m) {
  json j = {{"schema_version", kSchemaVersion}, {"config", m.config}, {"stages", m.stages}};
  write_file(dir / "manifest.json", json_document(j.dump(2), timestamp_utc()));
  return {"manifest.json"};
}

Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  const json j = read_json_document(path);
  return guarded(path, [&] {
    return Manifest{j.at("config").get<std::string>(),
                    j.at("stages").get<std::vector<std::string>>()};
  });
}

std::vector<std::string> write_scan(const fs::path& dir, const J1Result& j1) {
  std::vector<json> records;
  json meta = level_json(j1.config);
  meta["record"] = "scan";
  meta["gate"] = j1.gate;
  meta["mean_sup"] = j1.mean_sup;
  meta["c0"] = j1.c0;
  meta["windows"] = j1.sups.size();
  records.push_back(meta);
  for (const auto& e : j1.config.entries) records.push_back(entry_json(j1.config.level, e));
  write_file(dir / "J1.jsonl", jsonl("configuration", records));

  std::string csv = csv_header("scan", timestamp_utc()) + "\nwindow,x,sup\n";
  const std::int64_t H = j1.config.separation;
  for (std::size_t i = 0; i < j1.sups.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(j1.config.lo + static_cast<std::int64_t>(i) * H) +
           "," + json(j1.sups[i]).dump() + "\n";
  }
  write_file(dir / "scan.csv", csv);
  return {"J1.jsonl", "scan.csv"};
}

J1Result read_scan(const fs::path& dir) {
  const fs::path path = dir / "J1.jsonl";
  const auto records = read_jsonl(path);
  return guarded(path, [&] {
    if (records.empty() || records[0].at("record") != "scan") io_error(path, "missing scan record");
    J1Result r;
    r.config = level_from(records[0]);
    r.gate = records[0].at("gate").get<bool>();
    r.mean_sup = records[0].at("mean_sup").get<double>();
    r.c0 = records[0].at("c0").get<double>();
    for (std::size_t i = 1; i < records.size(); ++i) r.config.entries.push_back(entry_from(records[i]));
    const fs::path csv = dir / "scan.csv";
    const auto lines = body_lines(csv);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto comma = lines[i].rfind(',');
      r.sups.push_back(parse_json(csv, lines[i].substr(comma + 1)).get<double>());
    }
    if (r.sups.size() != records[0].at("windows").get<std::size_t>()) {
      io_error(csv, "window count does not match J1.jsonl");
    }
    return r;
  });
}

std::vector<std::string> write_scale(const fs::path& dir, const ScaleSelection& s) {
  json qualified = json::array();
  for (const auto& q : s.qualified) qualified.push_back({{"index", q.index}, {"primes", q.primes}});
  json j = {{"schema_version", kSchemaVersion}, {"P", s.P}, {"blocks", s.blocks},
            {"good_fraction", s.good_fraction}, {"qualified", qualified}};
  write_file(dir / "scale.json", json_document(j.dump(2), timestamp_utc()));
  return {"scale.json"};
}

ScaleSelection read_scale(const fs::path& dir) {
  const fs::path path = dir / "scale.json";
  const json j = read_json_document(path);
  return guarded(path, [&] {
    ScaleSelection s;
    s.P = j.at("P").get<std::int64_t>();
    s.blocks = j.at("blocks").get<std::vector<std::int64_t>>();
    s.good_fraction = j.at("good_fraction").get<std::vector<double>>();
    for (const auto& q : j.at("qualified")) {
      s.qualified.push_back({q.at("index").get<std::size_t>(),
                             q.at("primes").get<std::vector<std::int64_t>>()});
    }
    return s;
  });
}

std::vector<std::string> write_recursion(const fs::path& dir, const Recursion& r) {
  std::vector<json> levels;
  for (const auto& c : r.levels) {
    levels.push_back(level_json(c));
    for (const auto& e : c.entries) levels.push_back(entry_json(c.level, e));
  }
  write_file(dir / "levels.jsonl", jsonl("configuration", levels));

  std::vector<json> links;
  for (std::size_t L = 0; L < r.links.size(); ++L) {
    for (const auto& l : r.links[L]) {
      links.push_back({{"level", L}, {"p", l.p}, {"source", l.source}, {"target", l.target},
                       {"pos_residual", l.pos_residual}, {"phase_residual", l.phase_residual}});
    }
  }
  write_file(dir / "links.jsonl", jsonl("links", links));

  json j = {{"schema_version", kSchemaVersion}, {"P", r.P}, {"k_tilde", r.k_tilde},
            {"k_tilde_natural", r.k_tilde_natural}, {"k_tilde_flagged", r.k_tilde_flagged},
            {"levels", r.levels.size()}, {"composite_links", r.composite.size()}};
  write_file(dir / "recursion.json", json_document(j.dump(2), timestamp_utc()));
  return {"levels.jsonl", "links.jsonl", "recursion.json"};
}

Recursion read_recursion(const fs::path& dir, std::int64_t H) {
  const fs::path meta_path = dir / "recursion.json";
  const json meta = read_json_document(meta_path);
  Recursion r;
  guarded(meta_path, [&] {
    r.P = meta.at("P").get<std::int64_t>();
    r.k_tilde = meta.at("k_tilde").get<int>();
    r.k_tilde_natural = meta.at("k_tilde_natural").get<int>();
    r.k_tilde_flagged = meta.at("k_tilde_flagged").get<bool>();
    return 0;
  });
  const fs::path levels_path = dir / "levels.jsonl";
  guarded(levels_path, [&] {
    for (const auto& rec : read_jsonl(levels_path)) {
      if (rec.at("record") == "level") {
        r.levels.push_back(level_from(rec));
      } else {
        if (r.levels.empty()) io_error(levels_path, "entry before its level record");
        r.levels.back().entries.push_back(entry_from(rec));
      }
    }
    return 0;
  });
  if (r.levels.size() != meta.at("levels").get<std::size_t>()) {
    io_error(levels_path, "level count does not match recursion.json");
  }
  r.links.resize(r.levels.empty() ? 0 : r.levels.size() - 1);
  const fs::path links_path = dir / "links.jsonl";
  guarded(links_path, [&] {
    for (const auto& rec : read_jsonl(links_path)) {
      const auto L = rec.at("level").get<std::size_t>();
      if (L >= r.links.size()) io_error(links_path, "link level out of range");
      r.links[L].push_back({rec.at("p").get<std::int64_t>(), rec.at("source").get<std::size_t>(),
                            rec.at("target").get<std::size_t>(),
                            rec.at("pos_residual").get<double>(),
                            rec.at("phase_residual").get<double>()});
    }
    return 0;
  });
  r.composite = compose_links(r.levels, r.links, H);
  return r;
}

std::vector<std::string> write_model(const fs::path& dir, const ModulationModel& m,
                                     const VerifyReport* verify) {
  json j = {{"schema_version", kSchemaVersion},
            {"a", m.a},
            {"Q", m.Q},
            {"T", m.T},
            {"t_pretender", -2 * 3.14159265358979323846 * m.T},
            {"anchor", m.anchor},
            {"top_index", m.top_index},
            {"alpha_top", to_string(m.alpha_top)},
            {"approx", {{"a", m.approx.a}, {"q", m.approx.q}, {"err", m.approx.err},
                        {"support_count", m.approx.support_count}}},
            {"N", m.N},
            {"eps_v", m.eps_v},
            {"delta_v", m.delta_v},
            {"witness_fraction", m.witness_fraction},
            {"anchors", m.anchors},
            {"anchor_sources", m.anchor_sources},
            {"T_within_bound", m.T_within_bound},
            {"quality", m.quality}};
  std::vector<std::string> files{"model.json"};
  if (verify != nullptr) {
    j["verify"] = {{"linked", verify->linked}, {"verified", verify->verified},
                   {"fraction", verify->fraction}, {"H_star", verify->H_star},
                   {"correlated_fraction", verify->correlated_fraction}};
    std::string csv = csv_header("verify", timestamp_utc()) + "\nwindow,start,correlation\n";
    for (std::size_t i = 0; i < verify->window_starts.size(); ++i) {
      csv += std::to_string(i) + "," + std::to_string(verify->window_starts[i]) + "," +
             json(verify->correlations[i]).dump() + "\n";
    }
    write_file(dir / "report.csv", csv);
    files.push_back("report.csv");
  }
  write_file(dir / "model.json", json_document(j.dump(2), timestamp_utc()));
  return files;
}

ModulationModel read_model(const fs::path& dir) {
  const fs::path path = dir / "model.json";
  const json j = read_json_document(path);
  return guarded(path, [&] {
    ModulationModel m;
    m.a = j.at("a").get<std::int64_t>();
    m.Q = j.at("Q").get<std::int64_t>();
    m.T = j.at("T").get<double>();
    m.anchor = j.at("anchor").get<std::int64_t>();
    m.top_index = j.at("top_index").get<std::size_t>();
    m.alpha_top = parse_circle_point(j.at("alpha_top").get<std::string>());
    const auto& ap = j.at("approx");
    m.approx = {ap.at("a").get<std::int64_t>(), ap.at("q").get<std::int64_t>(),
                ap.at("err").get<double>(), ap.at("support_count").get<std::int64_t>()};
    m.N = j.at("N").get<std::int64_t>();
    m.eps_v = j.at("eps_v").get<double>();
    m.delta_v = j.at("delta_v").get<double>();
    m.witness_fraction = j.at("witness_fraction").get<double>();
    m.anchors = j.at("anchors").get<std::int64_t>();
    m.anchor_sources = j.at("anchor_sources").get<std::int64_t>();
    m.T_within_bound = j.at("T_within_bound").get<bool>();
    m.quality = j.at("quality").get<double>();
    return m;
  });
}

}  // namespace lfu
