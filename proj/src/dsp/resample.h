// src/dsp/resample.h

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

#ifndef LIPMEL_DSP_RESAMPLE_H_
#define LIPMEL_DSP_RESAMPLE_H_

#include <vector>

#include "dsp/audio.h"

namespace lipmel::dsp {

// Polyphase rational resampling by up/down with a Kaiser-windowed sinc
// low-pass (beta 5, half-length 10 * max(up, down) input-rate taps).
// Output length is ceil(n * up / down).
std::vector<double> resample_poly(const std::vector<double>& x, int up, int down);

// Resamples to `rate`, reducing the ratio by the gcd of the two rates.
AudioSignal resample(const AudioSignal& audio, int rate);

}  // namespace lipmel::dsp

#endif  // LIPMEL_DSP_RESAMPLE_H_
