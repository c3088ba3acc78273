// src/dsp/spectral.cc

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

#include "dsp/spectral.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace lipmel::dsp {

namespace {

// Reflection without edge repetition, extended periodically for pads longer
// than the signal.
std::size_t reflect_index(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  long m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < n ? m : period - m);
}

}  // namespace

void StftConfig::validate() const {
  if (fft_size == 0 || hop == 0 || win_length == 0 || hop > win_length ||
      win_length > fft_size)
    throw ConfigError("STFT config requires 0 < hop <= win_length <= fft_size");
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / n);
  return w;
}

namespace {

// Window of win_length centred in an fft_size frame.
std::vector<double> framed_window(const StftConfig& cfg) {
  std::vector<double> w(cfg.fft_size, 0.0);
  const auto h = hann_window(cfg.win_length);
  const std::size_t off = (cfg.fft_size - cfg.win_length) / 2;
  std::copy(h.begin(), h.end(), w.begin() + off);
  return w;
}

}  // namespace

ComplexSpectrogram stft(const std::vector<double>& samples,
                        const StftConfig& cfg) {
  cfg.validate();
  if (samples.empty()) throw ConfigError("stft: empty signal");
  const long n = static_cast<long>(samples.size());
  const long pad = static_cast<long>(cfg.fft_size / 2);
  const std::size_t T = cfg.frames_for(samples.size());
  const auto window = framed_window(cfg);
  ComplexSpectrogram out(T, cfg.bins());
  std::vector<double> frame(cfg.fft_size);
  for (std::size_t t = 0; t < T; ++t) {
    const long start = static_cast<long>(t * cfg.hop) - pad;
    for (std::size_t i = 0; i < cfg.fft_size; ++i) {
      const long pos = start + static_cast<long>(i);
      frame[i] = window[i] * samples[reflect_index(pos, n)];
    }
    const auto spec = rfft(frame);
    std::copy(spec.begin(), spec.end(), out.values.begin() + t * out.bins);
  }
  return out;
}

std::vector<double> istft(const ComplexSpectrogram& spec, const StftConfig& cfg,
                          std::size_t length) {
  cfg.validate();
  if (spec.frames == 0) throw ConfigError("istft: no frames");
  if (spec.bins != cfg.bins())
    throw ShapeError("istft: spectrogram has " + std::to_string(spec.bins) +
                     " bins, config expects " + std::to_string(cfg.bins()));
  const std::size_t T = spec.frames;
  const std::size_t pad = cfg.fft_size / 2;
  const std::size_t total = cfg.fft_size + cfg.hop * (T - 1);
  if (length == 0) length = cfg.hop * (T - 1);
  if (length + pad > total)
    throw ConfigError("istft: requested length exceeds frame coverage");
  const auto window = framed_window(cfg);
  std::vector<double> acc(total, 0.0), wsum(total, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const auto frame = irfft(
        std::span<const Complex>(spec.values.data() + t * spec.bins, spec.bins),
        cfg.fft_size);
    const std::size_t start = t * cfg.hop;
    for (std::size_t i = 0; i < cfg.fft_size; ++i) {
      acc[start + i] += window[i] * frame[i];
      wsum[start + i] += window[i] * window[i];
    }
  }
  double peak = 0;
  for (double w : wsum) peak = std::max(peak, w);
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double w = wsum[pad + i];
    if (w < 1e-8 * peak)
      throw ConfigError("istft: window sum vanishes at sample " +
                        std::to_string(i) + " (hop too large for window)");
    out[i] = acc[pad + i] / w;
  }
  return out;
}

MagnitudeSpectrogram magnitude(const ComplexSpectrogram& spec) {
  MagnitudeSpectrogram m(spec.frames, spec.bins);
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    m.values[i] = std::abs(spec.values[i]);
  return m;
}

double spectral_convergence(const std::vector<double>& samples,
                            const MagnitudeSpectrogram& target,
                            const StftConfig& cfg) {
  const auto m = magnitude(stft(samples, cfg));
  const std::size_t frames = std::min(m.frames, target.frames);
  double num = 0, den = 0;
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t k = 0; k < target.bins; ++k) {
      const double d = m.at(t, k) - target.at(t, k);
      num += d * d;
      den += target.at(t, k) * target.at(t, k);
    }
  // Frames present in only one of the two count fully against the estimate.
  for (std::size_t t = frames; t < target.frames; ++t)
    for (std::size_t k = 0; k < target.bins; ++k) {
      num += target.at(t, k) * target.at(t, k);
      den += target.at(t, k) * target.at(t, k);
    }
  for (std::size_t t = frames; t < m.frames; ++t)
    for (std::size_t k = 0; k < m.bins; ++k) num += m.at(t, k) * m.at(t, k);
  if (den == 0) return num == 0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

AudioSignal griffin_lim(const MagnitudeSpectrogram& mag, const StftConfig& cfg,
                        const GriffinLimOptions& opts) {
  if (opts.iterations < 1)
    throw ConfigError("griffin_lim: iterations must be >= 1");
  if (mag.bins != cfg.bins())
    throw ShapeError("griffin_lim: magnitude has " + std::to_string(mag.bins) +
                     " bins, config expects " + std::to_string(cfg.bins()));
  for (double v : mag.values)
    if (v < 0 || !std::isfinite(v))
      throw ConfigError("griffin_lim: magnitude must be finite and >= 0");
  const std::size_t length =
      opts.length ? opts.length : cfg.hop * (mag.frames - 1);

  ComplexSpectrogram est(mag.frames, mag.bins);
  for (std::size_t i = 0; i < mag.values.size(); ++i)
    est.values[i] = Complex(mag.values[i], 0.0);
  std::vector<double> x = istft(est, cfg, length);
  for (int it = 0; it < opts.iterations; ++it) {
    const auto s = stft(x, cfg);
    for (std::size_t t = 0; t < est.frames; ++t)
      for (std::size_t k = 0; k < est.bins; ++k) {
        const double phase =
            t < s.frames ? std::arg(s.at(t, k)) : 0.0;
        est.at(t, k) = std::polar(mag.at(t, k), phase);
      }
    x = istft(est, cfg, length);
  }
  AudioSignal out;
  out.sample_rate = cfg.sample_rate;
  out.samples = std::move(x);
  double peak = 0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0) return out;
  return normalize(out);
}

}  // namespace lipmel::dsp
