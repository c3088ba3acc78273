// src/data/synth.h

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

#ifndef LIPMEL_DATA_SYNTH_H_
#define LIPMEL_DATA_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "data/container.h"
#include "data/manifest.h"
#include "dsp/audio.h"

namespace lipmel::data {

// One symbol of the synthetic code: a tone and an ellipse pose.
struct SymbolStyle {
  double frequency_hz = 440;
  double amplitude = 0.8;
  double center_y = 56;  // on a 112-pixel frame
  double aperture = 10;  // vertical semi-axis on a 112-pixel frame
};

// Built-in alphabet, 8 entries.
const std::vector<SymbolStyle>& default_symbols();

struct SynthSpec {
  std::size_t n_clips = 8;
  double fps = 25;
  int sample_rate = 16000;
  double min_duration = 0.5;
  double max_duration = 1.0;
  std::size_t alphabet = 4;
  std::vector<SymbolStyle> symbols = default_symbols();
  std::size_t min_symbol_frames = 4;
  std::size_t max_symbol_frames = 7;
  std::uint32_t frame_size = 112;
  std::uint32_t channels = 1;
  std::uint64_t seed = 1;

  // "synth.*" keys; synth.frequencies overrides the tone of each symbol.
  void read(const KvConfig& kv);
  static std::vector<std::string> keys();
  void validate() const;

  // Requested length of clip i, before rounding to whole frames: durations
  // are spread evenly over [min_duration, max_duration].
  double nominal_duration(std::size_t i) const;
  double expected_total_duration() const;
};

struct SynthClip {
  ClipRecord record;
  VideoClip video;
  dsp::AudioSignal audio;
  std::vector<int> symbols;       // one entry per symbol occurrence
  std::vector<int> frame_symbol;  // symbol shown in each video frame
};

// Renders every clip in memory; deterministic in spec.seed.
std::vector<SynthClip> synth_clips(const SynthSpec& spec);

// Writes clips/<id>.lmf, clips/<id>.wav and manifest.jsonl under out_dir.
// Returns the manifest records.
std::vector<ClipRecord> synth_generate(const SynthSpec& spec, const std::string& out_dir);

// Draws one frame of symbol `s`.
void render_symbol_frame(const SynthSpec& spec, int s, VideoClip& clip, std::size_t t);

char symbol_letter(int s);

}  // namespace lipmel::data

#endif  // LIPMEL_DATA_SYNTH_H_
