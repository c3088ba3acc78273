// src/metrics/edit-distance.cc

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

#include "metrics/edit-distance.h"

#include <sstream>

#include "base/error.h"

namespace lipmel::metrics {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::vector<char32_t> split_chars(const std::string& text) {
  std::vector<char32_t> out;
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n;) {
    const unsigned char b = p[i];
    int len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xe ? 3 : (b >> 3) == 0x1e ? 4 : 0;
    char32_t cp = 0xfffd;
    if (len == 0 || i + len > n) {
      len = 1;
    } else {
      cp = len == 1 ? b : b & (0x7f >> len);
      for (int k = 1; k < len; ++k) {
        if ((p[i + k] & 0xc0) != 0x80) {
          cp = 0xfffd;
          len = k;
          break;
        }
        cp = (cp << 6) | (p[i + k] & 0x3f);
      }
    }
    i += len;
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v')
      continue;
    out.push_back(cp);
  }
  return out;
}

double wer_cer(const std::string& ref, const std::string& hyp, Unit unit) {
  EditOps ops;
  if (unit == Unit::kWord)
    ops = edit_distance(split_words(ref), split_words(hyp));
  else
    ops = edit_distance(split_chars(ref), split_chars(hyp));
  if (ops.ref_len == 0) throw ConfigError("error rate needs a non-empty reference");
  return static_cast<double>(ops.distance()) / static_cast<double>(ops.ref_len);
}

}  // namespace lipmel::metrics
