// src/data/preprocess.h

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

#ifndef LIPMEL_DATA_PREPROCESS_H_
#define LIPMEL_DATA_PREPROCESS_H_

#include <optional>
#include <string>

#include "base/rng.h"
#include "data/container.h"
#include "data/manifest.h"
#include "dsp/mel.h"
#include "tensor/tensor.h"

namespace lipmel::data {

struct PreprocessConfig {
  Index frame_size = 112;
  bool grayscale = true;  // average RGB input down to one channel
  dsp::StftConfig stft;
  Index n_mels = 80;
  double f_min = 0;
  double f_max = 8000;
};

struct PreparedClip {
  std::string id;
  Tensor frames;  // [C x (T+1) x S x S] in [0, 1], last frame all ones
  Tensor mel;     // [m x n_mels] log-mel
  dsp::AudioSignal audio;  // normalized waveform the mel was computed from
  std::optional<std::string> transcript;
};

class Preprocessor {
 public:
  explicit Preprocessor(const PreprocessConfig& cfg = {});

  const PreprocessConfig& config() const { return cfg_; }
  const dsp::MelFilterbank& filterbank() const { return fb_; }

  // Scales to [0, 1], converts to grayscale if configured, resizes
  // (bilinear) to frame_size and appends the all-ones period frame.
  Tensor frames(const VideoClip& clip) const;
  // Normalizes, resamples to the STFT rate if needed, then log-mel.
  Tensor mel(const dsp::AudioSignal& audio, dsp::AudioSignal* normalized = nullptr) const;

  // Reads the record's container and WAV. Parse failures name the clip id.
  PreparedClip operator()(const ClipRecord& record, const std::string& base_dir) const;

 private:
  PreprocessConfig cfg_;
  dsp::MelFilterbank fb_;
};

// With probability p, mirrors every frame of the clip left to right
// (one draw per clip).
Tensor augment_hflip(const Tensor& frames, double p, Rng& rng);

}  // namespace lipmel::data

#endif  // LIPMEL_DATA_PREPROCESS_H_
