// src/dsp/mel.h

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

#ifndef LIPMEL_DSP_MEL_H_
#define LIPMEL_DSP_MEL_H_

#include <cmath>
#include <vector>

#include "dsp/spectral.h"

namespace lipmel::dsp {

inline constexpr std::size_t kMelChannels = 80;
inline constexpr double kMelClipFloor = 1e-5;
// log(1e-5), the smallest value a log-mel frame can hold.
inline const double kLogMelFloor = std::log(kMelClipFloor);

double hz_to_mel(double hz);  // 2595 * log10(1 + f / 700)
double mel_to_hz(double mel);

// Triangular filters with centres uniformly spaced on the mel scale,
// peak weight 1. weights is n_mels x bins, row-major.
struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t bins = 0;
  double f_min = 0;
  double f_max = 0;
  std::vector<double> centers_hz;
  std::vector<double> weights;

  double at(std::size_t m, std::size_t k) const { return weights[m * bins + k]; }
};

MelFilterbank mel_filterbank(const StftConfig& cfg,
                             std::size_t n_mels = kMelChannels,
                             double f_min = 0.0, double f_max = 8000.0);

// T x n_mels, natural-log compressed.
using MelSpectrogram = FrameMatrix<double>;

// fb * magnitude, per frame (no log).
MelSpectrogram apply_filterbank(const MagnitudeSpectrogram& mag,
                                const MelFilterbank& fb);

// log(max(fb * |STFT(x)|, 1e-5)).
MelSpectrogram log_mel(const AudioSignal& audio, const StftConfig& cfg,
                       const MelFilterbank& fb);

// Pseudo-inverse fb^T (fb fb^T)^-1 applied per frame to linear-scale mel
// energies. With `clamp`, negative magnitudes are set to 0.
MagnitudeSpectrogram mel_to_linear(const MelSpectrogram& mel_energy,
                                   const MelFilterbank& fb, bool clamp = true);

// exp() of every entry, turning log-mel back into linear mel energies.
MelSpectrogram exp_mel(const MelSpectrogram& log_mel);

}  // namespace lipmel::dsp

#endif  // LIPMEL_DSP_MEL_H_
