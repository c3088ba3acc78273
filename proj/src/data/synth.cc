// src/data/synth.cc

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

#include "data/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "base/error.h"
#include "base/rng.h"

namespace lipmel::data {

namespace {

constexpr std::uint8_t kBackground = 16;
constexpr std::uint8_t kForeground = 224;
constexpr double kHalfWidth = 22;  // horizontal semi-axis on a 112-pixel frame
constexpr double kRampSeconds = 0.005;

}  // namespace

const std::vector<SymbolStyle>& default_symbols() {
  static const std::vector<SymbolStyle> table = {
      {300, 0.9, 36, 5},  {600, 0.7, 48, 9},  {1200, 0.8, 60, 13}, {2400, 0.6, 72, 17},
      {420, 0.8, 42, 7},  {850, 0.9, 54, 11}, {1700, 0.7, 66, 15}, {3400, 0.6, 78, 19},
  };
  return table;
}

char symbol_letter(int s) { return static_cast<char>('a' + s); }

void SynthSpec::read(const KvConfig& kv) {
  n_clips = static_cast<std::size_t>(kv.get_int("synth.n_clips", static_cast<std::int64_t>(n_clips)));
  fps = kv.get_double("synth.fps", fps);
  sample_rate = static_cast<int>(kv.get_int("synth.sample_rate", sample_rate));
  min_duration = kv.get_double("synth.min_duration", min_duration);
  max_duration = kv.get_double("synth.max_duration", max_duration);
  alphabet = static_cast<std::size_t>(kv.get_int("synth.alphabet", static_cast<std::int64_t>(alphabet)));
  min_symbol_frames = static_cast<std::size_t>(
      kv.get_int("synth.min_symbol_frames", static_cast<std::int64_t>(min_symbol_frames)));
  max_symbol_frames = static_cast<std::size_t>(
      kv.get_int("synth.max_symbol_frames", static_cast<std::int64_t>(max_symbol_frames)));
  frame_size = static_cast<std::uint32_t>(kv.get_int("synth.frame_size", frame_size));
  channels = static_cast<std::uint32_t>(kv.get_int("synth.channels", channels));
  seed = static_cast<std::uint64_t>(kv.get_int("synth.seed", static_cast<std::int64_t>(seed)));
  const auto freqs = kv.get_doubles("synth.frequencies", {});
  if (!freqs.empty()) {
    if (freqs.size() > symbols.size())
      throw ConfigError("synth.frequencies lists more than " +
                        std::to_string(symbols.size()) + " symbols");
    for (std::size_t i = 0; i < freqs.size(); ++i) symbols[i].frequency_hz = freqs[i];
    alphabet = freqs.size();
  }
}

std::vector<std::string> SynthSpec::keys() {
  return {"synth.n_clips",           "synth.fps",          "synth.sample_rate",
          "synth.min_duration",      "synth.max_duration", "synth.alphabet",
          "synth.min_symbol_frames", "synth.max_symbol_frames", "synth.frame_size",
          "synth.channels",          "synth.seed",         "synth.frequencies"};
}

void SynthSpec::validate() const {
  if (!(fps > 0) || sample_rate <= 0) throw ConfigError("synth: fps and sample rate must be positive");
  if (!(min_duration > 0 && min_duration <= max_duration))
    throw ConfigError("synth: need 0 < min_duration <= max_duration");
  if (alphabet < 1 || alphabet > symbols.size())
    throw ConfigError("synth.alphabet must lie in 1.." + std::to_string(symbols.size()));
  if (min_symbol_frames < 1 || min_symbol_frames > max_symbol_frames)
    throw ConfigError("synth: need 1 <= min_symbol_frames <= max_symbol_frames");
  if (frame_size < 16) throw ConfigError("synth.frame_size must be at least 16");
  if (channels != 1 && channels != 3) throw ConfigError("synth.channels must be 1 or 3");
  for (std::size_t s = 0; s < alphabet; ++s)
    if (!(symbols[s].frequency_hz > 0 && symbols[s].frequency_hz < sample_rate / 2.0))
      throw ConfigError("synth: symbol frequencies must lie below Nyquist");
}

double SynthSpec::nominal_duration(std::size_t i) const {
  if (n_clips == 0) return 0;
  return min_duration + (max_duration - min_duration) * (static_cast<double>(i) + 0.5) /
                            static_cast<double>(n_clips);
}

double SynthSpec::expected_total_duration() const {
  return static_cast<double>(n_clips) * (min_duration + max_duration) / 2;
}

void render_symbol_frame(const SynthSpec& spec, int s, VideoClip& clip, std::size_t t) {
  const SymbolStyle& st = spec.symbols[static_cast<std::size_t>(s)];
  const double scale = spec.frame_size / 112.0;
  const double cx = spec.frame_size / 2.0, cy = st.center_y * scale;
  const double ax = kHalfWidth * scale, ay = st.aperture * scale;
  for (std::size_t y = 0; y < clip.height; ++y)
    for (std::size_t x = 0; x < clip.width; ++x) {
      const double dx = (x + 0.5 - cx) / ax, dy = (y + 0.5 - cy) / ay;
      const std::uint8_t v = dx * dx + dy * dy <= 1 ? kForeground : kBackground;
      for (std::size_t c = 0; c < clip.channels; ++c) clip.at(t, y, x, c) = v;
    }
}

std::vector<SynthClip> synth_clips(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<SynthClip> out;
  for (std::size_t i = 0; i < spec.n_clips; ++i) {
    SynthClip clip;
    char id[32];
    std::snprintf(id, sizeof id, "clip%04zu", i);
    const std::size_t frames = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(spec.nominal_duration(i) * spec.fps)));

    // Symbol runs: lengths in [min, max] frames, consecutive symbols differ
    // when the alphabet allows it.
    std::size_t t = 0;
    int prev = -1;
    while (t < frames) {
      const std::size_t span = spec.max_symbol_frames - spec.min_symbol_frames + 1;
      std::size_t len = spec.min_symbol_frames + static_cast<std::size_t>(rng.below(span));
      len = std::min(len, frames - t);
      if (frames - t - len > 0 && frames - t - len < spec.min_symbol_frames) len = frames - t;
      int s;
      if (spec.alphabet == 1) {
        s = 0;
      } else {
        s = static_cast<int>(rng.below(spec.alphabet - (prev >= 0 ? 1 : 0)));
        if (prev >= 0 && s >= prev) ++s;
      }
      clip.symbols.push_back(s);
      clip.frame_symbol.insert(clip.frame_symbol.end(), len, s);
      prev = s;
      t += len;
    }

    clip.video.frames = static_cast<std::uint32_t>(frames);
    clip.video.height = clip.video.width = spec.frame_size;
    clip.video.channels = spec.channels;
    clip.video.pixels.assign(frames * clip.video.frame_size(), 0);
    for (std::size_t f = 0; f < frames; ++f)
      render_symbol_frame(spec, clip.frame_symbol[f], clip.video, f);

    // Audio: each video frame owns the samples between its boundaries.
    auto boundary = [&](std::size_t f) {
      return static_cast<std::size_t>(std::llround(static_cast<double>(f) * spec.sample_rate / spec.fps));
    };
    clip.audio.sample_rate = spec.sample_rate;
    clip.audio.samples.assign(boundary(frames), 0.0);
    const double ramp = kRampSeconds * spec.sample_rate;
    // Equal neighbouring frames form one continuous tone.
    for (std::size_t f0 = 0; f0 < frames;) {
      const int s = clip.frame_symbol[f0];
      std::size_t f1 = f0;
      while (f1 < frames && clip.frame_symbol[f1] == s) ++f1;
      const std::size_t a = boundary(f0), b = boundary(f1);
      const SymbolStyle& st = spec.symbols[static_cast<std::size_t>(s)];
      for (std::size_t n = a; n < b; ++n) {
        const double k = static_cast<double>(n - a);
        const double edge = std::min(k, static_cast<double>(b - 1 - n));
        const double env = edge >= ramp ? 1.0 : 0.5 - 0.5 * std::cos(M_PI * edge / ramp);
        clip.audio.samples[n] =
            st.amplitude * env * std::sin(2 * M_PI * st.frequency_hz * k / spec.sample_rate);
      }
      f0 = f1;
    }

    clip.record.id = id;
    clip.record.video_path = std::string("clips/") + id + ".lmf";
    clip.record.audio_path = std::string("clips/") + id + ".wav";
    std::string text;
    for (int s : clip.symbols) {
      if (!text.empty()) text += ' ';
      text += symbol_letter(s);
    }
    clip.record.transcript = text;
    clip.record.fps = spec.fps;
    clip.record.duration = static_cast<double>(frames) / spec.fps;
    out.push_back(std::move(clip));
  }
  return out;
}

std::vector<ClipRecord> synth_generate(const SynthSpec& spec, const std::string& out_dir) {
  const auto clips = synth_clips(spec);
  try {
    std::filesystem::create_directories(std::filesystem::path(out_dir) / "clips");
  } catch (const std::filesystem::filesystem_error& e) {
    throw IoError("cannot create output directory '" + out_dir + "': " + e.what());
  }
  std::vector<ClipRecord> records;
  for (const auto& c : clips) {
    write_container(resolve_path(out_dir, c.record.video_path), c.video);
    dsp::write_wav(resolve_path(out_dir, c.record.audio_path), c.audio);
    records.push_back(c.record);
  }
  write_manifest(resolve_path(out_dir, "manifest.jsonl"), records);
  return records;
}

}  // namespace lipmel::data
