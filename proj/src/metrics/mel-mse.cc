// src/metrics/mel-mse.cc

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

#include "metrics/mel-mse.h"

#include <algorithm>
#include <string>

#include "base/error.h"

namespace lipmel::metrics {

double mel_mse(const dsp::MelSpectrogram& a, const dsp::MelSpectrogram& b) {
  if (a.bins != b.bins)
    throw ShapeError("mel_mse: channel mismatch (" + std::to_string(a.bins) + " vs " +
                     std::to_string(b.bins) + ")");
  const std::size_t frames = std::min(a.frames, b.frames);
  if (frames == 0 || a.bins == 0) throw ShapeError("mel_mse: no overlapping frames");
  double s = 0;
  for (std::size_t i = 0; i < frames * a.bins; ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return s / static_cast<double>(frames * a.bins);
}

}  // namespace lipmel::metrics
