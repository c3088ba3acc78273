// src/dsp/spectral.h

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

#ifndef LIPMEL_DSP_SPECTRAL_H_
#define LIPMEL_DSP_SPECTRAL_H_

#include <vector>

#include "dsp/audio.h"
#include "dsp/fft.h"

namespace lipmel::dsp {

// 1024-point FFT, 64 ms Hann window, 16 ms hop at 16 kHz.
struct StftConfig {
  int sample_rate = kSampleRate;
  std::size_t fft_size = 1024;
  std::size_t win_length = 1024;
  std::size_t hop = 256;

  std::size_t bins() const { return fft_size / 2 + 1; }
  // Frames produced for `n` samples under center padding.
  std::size_t frames_for(std::size_t n) const { return 1 + n / hop; }
  void validate() const;
};

// Row-major T x bins matrix.
template <typename T>
struct FrameMatrix {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<T> values;

  FrameMatrix() = default;
  FrameMatrix(std::size_t t, std::size_t b) : frames(t), bins(b), values(t * b) {}
  T& at(std::size_t t, std::size_t k) { return values[t * bins + k]; }
  const T& at(std::size_t t, std::size_t k) const { return values[t * bins + k]; }
};

using ComplexSpectrogram = FrameMatrix<Complex>;
using MagnitudeSpectrogram = FrameMatrix<double>;

// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

// Center (reflect) padded STFT: T = 1 + floor(len / hop).
ComplexSpectrogram stft(const std::vector<double>& samples,
                        const StftConfig& cfg);

// Weighted overlap-add with squared-window normalisation. `length` of 0
// means hop * (T - 1). Throws when an output sample has (near) zero
// window-sum coverage.
std::vector<double> istft(const ComplexSpectrogram& spec, const StftConfig& cfg,
                          std::size_t length = 0);

MagnitudeSpectrogram magnitude(const ComplexSpectrogram& spec);

// || |STFT(x)| - M ||_F / || M ||_F
double spectral_convergence(const std::vector<double>& samples,
                            const MagnitudeSpectrogram& target,
                            const StftConfig& cfg);

struct GriffinLimOptions {
  int iterations = 60;
  std::size_t length = 0;  // 0: hop * (T - 1)
};

// Phase reconstruction from zero phase; the result is peak-normalised
// (silence stays silent).
AudioSignal griffin_lim(const MagnitudeSpectrogram& magnitude,
                        const StftConfig& cfg, const GriffinLimOptions& opts);

}  // namespace lipmel::dsp

#endif  // LIPMEL_DSP_SPECTRAL_H_
