// src/dsp/audio.h

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

#ifndef LIPMEL_DSP_AUDIO_H_
#define LIPMEL_DSP_AUDIO_H_

#include <string>
#include <vector>

#include "base/error.h"

namespace lipmel::dsp {

inline constexpr int kSampleRate = 16000;

struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Divides by the peak absolute value. All-zero input is returned unchanged;
// empty input is an error.
AudioSignal normalize(const AudioSignal& audio);

// Mono 16-bit PCM RIFF/WAVE.
AudioSignal read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioSignal& audio);
std::vector<unsigned char> encode_wav(const AudioSignal& audio);
AudioSignal decode_wav(const std::vector<unsigned char>& bytes);

// Row-major float matrix file: u32 version, u32 rows, u32 cols, then
// rows*cols little-endian f32. Used for mel spectrograms (cols = 80) and
// attention alignments.
struct MatrixFile {
  static constexpr unsigned kVersion = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;
};
void write_matrix(const std::string& path, const MatrixFile& m);
MatrixFile read_matrix(const std::string& path);

}  // namespace lipmel::dsp

#endif  // LIPMEL_DSP_AUDIO_H_
