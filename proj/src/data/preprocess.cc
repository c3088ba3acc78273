// src/data/preprocess.cc

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

#include "data/preprocess.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"
#include "dsp/resample.h"

namespace lipmel::data {

namespace {

// Bilinear sample of one channel plane at continuous pixel-centre coordinates.
Real sample_bilinear(const std::vector<Real>& plane, Index h, Index w, Real y, Real x) {
  y = std::clamp(y, Real(0), Real(h - 1));
  x = std::clamp(x, Real(0), Real(w - 1));
  const Index y0 = static_cast<Index>(std::floor(y)), x0 = static_cast<Index>(std::floor(x));
  const Index y1 = std::min(y0 + 1, h - 1), x1 = std::min(x0 + 1, w - 1);
  const Real fy = y - y0, fx = x - x0;
  auto at = [&](Index r, Index c) { return plane[static_cast<std::size_t>(r * w + c)]; };
  return (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x1)) +
         fy * ((1 - fx) * at(y1, x0) + fx * at(y1, x1));
}

}  // namespace

Preprocessor::Preprocessor(const PreprocessConfig& cfg)
    : cfg_(cfg),
      fb_(dsp::mel_filterbank(cfg.stft, static_cast<std::size_t>(cfg.n_mels), cfg.f_min,
                              cfg.f_max)) {
  if (cfg_.frame_size < 1) throw ConfigError("frame_size must be positive");
}

Tensor Preprocessor::frames(const VideoClip& clip) const {
  const Index T = clip.frames, H = clip.height, W = clip.width;
  if (H < 1 || W < 1) throw ShapeError("video frames have zero size");
  if (clip.pixels.size() != static_cast<std::size_t>(T) * clip.frame_size())
    throw ShapeError("video pixel count does not match its header");
  const Index cin = clip.channels;
  const Index cout = cfg_.grayscale ? 1 : cin;
  const Index S = cfg_.frame_size;
  std::vector<Real> out(static_cast<std::size_t>(cout * (T + 1) * S * S));
  std::vector<Real> plane(static_cast<std::size_t>(H * W));
  for (Index t = 0; t < T; ++t)
    for (Index c = 0; c < cout; ++c) {
      for (Index y = 0; y < H; ++y)
        for (Index x = 0; x < W; ++x) {
          Real v;
          if (cfg_.grayscale && cin == 3) {
            v = (Real(clip.at(t, y, x, 0)) + clip.at(t, y, x, 1) + clip.at(t, y, x, 2)) / 3;
          } else {
            v = clip.at(t, y, x, static_cast<std::size_t>(c));
          }
          plane[static_cast<std::size_t>(y * W + x)] = v / 255;
        }
      Real* dst = out.data() + (c * (T + 1) + t) * S * S;
      if (H == S && W == S) {
        std::copy(plane.begin(), plane.end(), dst);
        continue;
      }
      const Real sy = Real(H) / S, sx = Real(W) / S;
      for (Index y = 0; y < S; ++y)
        for (Index x = 0; x < S; ++x)
          dst[y * S + x] = sample_bilinear(plane, H, W, (y + Real(0.5)) * sy - Real(0.5),
                                           (x + Real(0.5)) * sx - Real(0.5));
    }
  for (Index c = 0; c < cout; ++c) {
    Real* period = out.data() + (c * (T + 1) + T) * S * S;
    std::fill(period, period + S * S, Real(1));
  }
  return Tensor::from({cout, T + 1, S, S}, std::move(out));
}

Tensor Preprocessor::mel(const dsp::AudioSignal& audio, dsp::AudioSignal* normalized) const {
  dsp::AudioSignal a = audio;
  if (a.sample_rate != cfg_.stft.sample_rate) a = dsp::resample(a, cfg_.stft.sample_rate);
  a = dsp::normalize(a);
  const auto m = dsp::log_mel(a, cfg_.stft, fb_);
  if (normalized) *normalized = a;
  std::vector<Real> v(m.values.begin(), m.values.end());
  return Tensor::from({static_cast<Index>(m.frames), static_cast<Index>(m.bins)}, std::move(v));
}

PreparedClip Preprocessor::operator()(const ClipRecord& record,
                                      const std::string& base_dir) const {
  PreparedClip p;
  p.id = record.id;
  p.transcript = record.transcript;
  try {
    p.frames = frames(read_container(resolve_path(base_dir, record.video_path)));
    p.mel = mel(dsp::read_wav(resolve_path(base_dir, record.audio_path)), &p.audio);
  } catch (const ParseError& e) {
    throw ParseError("clip '" + record.id + "': " + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError("clip '" + record.id + "': " + e.what());
  }
  return p;
}

Tensor augment_hflip(const Tensor& frames, double p, Rng& rng) {
  if (rng.uniform() >= p) return frames;
  const Index W = frames.dim(-1);
  const Index rows = frames.numel() / W;
  std::vector<Real> out(frames.data().begin(), frames.data().end());
  for (Index r = 0; r < rows; ++r) std::reverse(out.begin() + r * W, out.begin() + (r + 1) * W);
  return Tensor::from(frames.shape(), std::move(out));
}

}  // namespace lipmel::data
