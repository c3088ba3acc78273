// src/base/kv-config.h

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

#ifndef LIPMEL_BASE_KV_CONFIG_H_
#define LIPMEL_BASE_KV_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lipmel {

// Flat "key = value" text. Blank lines and lines starting with '#' are
// ignored; later assignments override earlier ones.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text, const std::string& origin = "config");
  static KvConfig load(const std::string& path);

  // Applies "key=value" overrides.
  void set(const std::string& key, const std::string& value);
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Typed reads; missing keys fall back to `fallback`, malformed values throw
  // ConfigError naming the key.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::int64_t> get_ints(const std::string& key,
                                     const std::vector<std::int64_t>& fallback) const;

  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;

  // Throws ConfigError on any key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

  // Sorted "key = value" lines.
  std::string to_string() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace lipmel

#endif  // LIPMEL_BASE_KV_CONFIG_H_
