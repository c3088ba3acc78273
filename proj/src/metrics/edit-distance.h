// src/metrics/edit-distance.h

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

#ifndef LIPMEL_METRICS_EDIT_DISTANCE_H_
#define LIPMEL_METRICS_EDIT_DISTANCE_H_

#include <cstddef>
#include <string>
#include <vector>

namespace lipmel::metrics {

struct EditOps {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }
};

// Unit-cost Levenshtein alignment of hyp against ref. The backtrack prefers
// substitution (or match), then insertion, then deletion, so the S/D/I split
// is deterministic.
template <typename T>
EditOps edit_distance(const std::vector<T>& ref, const std::vector<T>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& {
    return d[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t ins = at(i, j - 1) + 1;
      const std::size_t del = at(i - 1, j) + 1;
      at(i, j) = std::min(sub, std::min(ins, del));
    }
  EditOps ops;
  ops.ref_len = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++ops.substitutions;
        --i, --j;
        continue;
      }
    }
    if (j > 0 && at(i, j) == at(i, j - 1) + 1) {
      ++ops.insertions;
      --j;
    } else {
      ++ops.deletions;
      --i;
    }
  }
  return ops;
}

enum class Unit { kWord, kChar };

// Whitespace-separated words.
std::vector<std::string> split_words(const std::string& text);
// UTF-8 code points, whitespace removed. Malformed bytes become U+FFFD.
std::vector<char32_t> split_chars(const std::string& text);

// (S + D + I) / reference length. Throws ConfigError on an empty reference.
double wer_cer(const std::string& ref, const std::string& hyp, Unit unit);

}  // namespace lipmel::metrics

#endif  // LIPMEL_METRICS_EDIT_DISTANCE_H_
