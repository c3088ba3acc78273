// src/metrics/mel-mse.h

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

#ifndef LIPMEL_METRICS_MEL_MSE_H_
#define LIPMEL_METRICS_MEL_MSE_H_

#include "dsp/mel.h"

namespace lipmel::metrics {

// Mean squared difference over the first min(a.frames, b.frames) frames.
// Throws ShapeError when channel counts differ or no frames overlap.
double mel_mse(const dsp::MelSpectrogram& a, const dsp::MelSpectrogram& b);

}  // namespace lipmel::metrics

#endif  // LIPMEL_METRICS_MEL_MSE_H_
