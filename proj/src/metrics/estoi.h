// src/metrics/estoi.h

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

#ifndef LIPMEL_METRICS_ESTOI_H_
#define LIPMEL_METRICS_ESTOI_H_

#include <vector>

#include "dsp/audio.h"

namespace lipmel::metrics {

struct EstoiConfig {
  int sample_rate = 10000;
  std::size_t frame = 256;
  std::size_t hop = 128;
  std::size_t fft_size = 512;
  std::size_t bands = 15;
  double min_band_hz = 150;
  std::size_t segment = 30;
  double dyn_range_db = 40;

  // Centre, lower and upper edge of band k (third-octave spacing).
  double center_hz(std::size_t k) const;
  double low_hz(std::size_t k) const;
  double high_hz(std::size_t k) const;
  void validate() const;
};

// Shortest non-silent input, in seconds at the working rate, that yields one
// full segment.
double estoi_min_duration(const EstoiConfig& cfg = {});

// Extended STOI of `degraded` against `clean`. Both are resampled to the
// working rate; if the lengths differ both are cut to the shorter one.
// Frames more than dyn_range_db below the loudest clean frame are dropped
// from both signals. Throws ConfigError on mismatched sample rates and when
// too little audio survives.
double estoi(const dsp::AudioSignal& clean, const dsp::AudioSignal& degraded,
             const EstoiConfig& cfg = {});

// Band-envelope matrix (bands x frames) after silence removal; exposed for
// tests.
std::vector<std::vector<double>> third_octave_envelopes(
    const std::vector<double>& x, const EstoiConfig& cfg);

}  // namespace lipmel::metrics

#endif  // LIPMEL_METRICS_ESTOI_H_
