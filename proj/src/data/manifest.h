// src/data/manifest.h

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

#ifndef LIPMEL_DATA_MANIFEST_H_
#define LIPMEL_DATA_MANIFEST_H_

#include <optional>
#include <string>
#include <vector>

namespace lipmel::data {

struct ClipRecord {
  std::string id;
  std::string video_path;  // relative paths resolve against the manifest's directory
  std::string audio_path;
  std::optional<std::string> transcript;
  double fps = 25;
  double duration = 0;  // seconds

  bool operator==(const ClipRecord&) const = default;
};

// One JSON object per line with keys id, video_path, audio_path, transcript,
// fps, duration. Blank lines are skipped. Malformed lines raise ParseError
// with the line number; duplicate ids raise ParseError.
std::vector<ClipRecord> parse_manifest(const std::string& text,
                                       const std::string& origin = "manifest");
std::vector<ClipRecord> load_manifest(const std::string& path);

std::string format_manifest(const std::vector<ClipRecord>& records);
void write_manifest(const std::string& path, const std::vector<ClipRecord>& records);

// Directory that relative record paths are resolved against.
std::string manifest_dir(const std::string& manifest_path);
std::string resolve_path(const std::string& base_dir, const std::string& path);

}  // namespace lipmel::data

#endif  // LIPMEL_DATA_MANIFEST_H_
