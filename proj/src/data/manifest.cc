// src/data/manifest.cc

// Copyright 2026  The lipmel Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "data/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "base/error.h"
#include "json.hpp"

namespace lipmel::data {

namespace {

using Json = nlohmann::ordered_json;

ClipRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("record is not an object");
  ClipRecord r;
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string())
      throw ParseError(std::string("field '") + key + "' missing or not a string");
    return j[key].get<std::string>();
  };
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number())
      throw ParseError(std::string("field '") + key + "' missing or not a number");
    return j[key].get<double>();
  };
  r.id = str("id");
  r.video_path = str("video_path");
  r.audio_path = str("audio_path");
  if (j.contains("transcript") && !j["transcript"].is_null()) r.transcript = str("transcript");
  r.fps = num("fps");
  r.duration = num("duration");
  if (r.id.empty()) throw ParseError("empty id");
  if (r.video_path.empty() || r.audio_path.empty()) throw ParseError("empty path");
  if (!(r.fps > 0)) throw ParseError("fps must be positive");
  if (!(r.duration > 0)) throw ParseError("duration must be positive");
  return r;
}

}  // namespace

std::vector<ClipRecord> parse_manifest(const std::string& text, const std::string& origin) {
  std::vector<ClipRecord> out;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    ClipRecord r;
    try {
      r = record_from_json(Json::parse(line));
    } catch (const Json::exception& e) {
      throw ParseError(where + e.what());
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    if (!ids.insert(r.id).second) throw ParseError(where + "duplicate id '" + r.id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ClipRecord> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path);
}

std::string format_manifest(const std::vector<ClipRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    Json j;
    j["id"] = r.id;
    j["video_path"] = r.video_path;
    j["audio_path"] = r.audio_path;
    j["transcript"] = r.transcript ? Json(*r.transcript) : Json(nullptr);
    j["fps"] = r.fps;
    j["duration"] = r.duration;
    out += j.dump() + "\n";
  }
  return out;
}

void write_manifest(const std::string& path, const std::vector<ClipRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest '" + path + "'");
  out << format_manifest(records);
  if (!out) throw IoError("write failed for manifest '" + path + "'");
}

std::string manifest_dir(const std::string& manifest_path) {
  return std::filesystem::path(manifest_path).parent_path().string();
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace lipmel::data
