// src/metrics/estoi.cc

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

#include "metrics/estoi.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "base/error.h"
#include "dsp/fft.h"
#include "dsp/resample.h"

namespace lipmel::metrics {

namespace {

// Symmetric Hann without its zero end points.
std::vector<double> inner_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2 * M_PI * static_cast<double>(i + 1) /
                                static_cast<double>(n + 1));
  return w;
}

std::size_t frame_count(std::size_t n, const EstoiConfig& cfg) {
  if (n <= cfg.frame) return 0;
  return (n - cfg.frame - 1) / cfg.hop + 1;
}

// Drops frames of x more than dyn_range_db below its loudest frame, along
// with the matching frames of y, then rebuilds both by overlap-add.
void remove_silent_frames(std::vector<double>& x, std::vector<double>& y,
                          const EstoiConfig& cfg) {
  const auto w = inner_hann(cfg.frame);
  const std::size_t frames = frame_count(x.size(), cfg);
  std::vector<double> energy(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double s = 0;
    for (std::size_t i = 0; i < cfg.frame; ++i) {
      const double v = w[i] * x[f * cfg.hop + i];
      s += v * v;
    }
    energy[f] = 20 * std::log10(std::sqrt(s) + std::numeric_limits<double>::epsilon());
  }
  const double peak = frames ? *std::max_element(energy.begin(), energy.end()) : 0;
  std::vector<std::size_t> keep;
  for (std::size_t f = 0; f < frames; ++f)
    if (peak - cfg.dyn_range_db - energy[f] < 0) keep.push_back(f);
  const std::size_t len = keep.empty() ? 0 : (keep.size() - 1) * cfg.hop + cfg.frame;
  std::vector<double> xs(len, 0.0), ys(len, 0.0);
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (std::size_t i = 0; i < cfg.frame; ++i) {
      xs[k * cfg.hop + i] += w[i] * x[keep[k] * cfg.hop + i];
      ys[k * cfg.hop + i] += w[i] * y[keep[k] * cfg.hop + i];
    }
  x.swap(xs);
  y.swap(ys);
}

// Unit-norm, zero-mean rows (bands over time), then the same for columns.
void row_col_normalize(std::vector<double>& seg, std::size_t rows, std::size_t cols) {
  auto normalize = [&](std::size_t count, std::size_t len, auto index) {
    for (std::size_t a = 0; a < count; ++a) {
      double mean = 0;
      for (std::size_t b = 0; b < len; ++b) mean += seg[index(a, b)];
      mean /= static_cast<double>(len);
      double norm = 0;
      for (std::size_t b = 0; b < len; ++b) {
        double& v = seg[index(a, b)];
        v -= mean;
        norm += v * v;
      }
      norm = std::sqrt(norm);
      if (norm == 0) continue;
      for (std::size_t b = 0; b < len; ++b) seg[index(a, b)] /= norm;
    }
  };
  normalize(rows, cols, [cols](std::size_t r, std::size_t c) { return r * cols + c; });
  normalize(cols, rows, [cols](std::size_t c, std::size_t r) { return r * cols + c; });
}

}  // namespace

double EstoiConfig::center_hz(std::size_t k) const {
  return min_band_hz * std::pow(2.0, static_cast<double>(k) / 3.0);
}
double EstoiConfig::low_hz(std::size_t k) const {
  return min_band_hz * std::pow(2.0, (2.0 * static_cast<double>(k) - 1) / 6.0);
}
double EstoiConfig::high_hz(std::size_t k) const {
  return min_band_hz * std::pow(2.0, (2.0 * static_cast<double>(k) + 1) / 6.0);
}

void EstoiConfig::validate() const {
  if (sample_rate <= 0 || frame == 0 || hop == 0 || hop > frame || fft_size < frame ||
      bands == 0 || segment == 0 || !(min_band_hz > 0))
    throw ConfigError("invalid ESTOI configuration");
  for (std::size_t k = 0; k < bands; ++k) {
    if (!(low_hz(k) < high_hz(k)) || (k && !(high_hz(k - 1) <= high_hz(k))))
      throw ConfigError("ESTOI band edges must increase");
    if (high_hz(k) >= sample_rate / 2.0)
      throw ConfigError("ESTOI band edges must stay below Nyquist");
  }
}

double estoi_min_duration(const EstoiConfig& cfg) {
  return static_cast<double>((cfg.segment - 1) * cfg.hop + cfg.frame + 1) /
         cfg.sample_rate;
}

std::vector<std::vector<double>> third_octave_envelopes(
    const std::vector<double>& x, const EstoiConfig& cfg) {
  const std::size_t bins = cfg.fft_size / 2 + 1;
  std::vector<std::size_t> lo(cfg.bands), hi(cfg.bands);
  auto nearest = [&](double hz) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.fft_size;
      const double d = (f - hz) * (f - hz);
      if (d < best_d) best_d = d, best = k;
    }
    return best;
  };
  for (std::size_t b = 0; b < cfg.bands; ++b) {
    lo[b] = nearest(cfg.low_hz(b));
    hi[b] = nearest(cfg.high_hz(b));
  }
  const auto w = inner_hann(cfg.frame);
  const std::size_t frames = frame_count(x.size(), cfg);
  std::vector<std::vector<double>> env(cfg.bands, std::vector<double>(frames));
  std::vector<double> buf(cfg.fft_size);
  for (std::size_t f = 0; f < frames; ++f) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < cfg.frame; ++i) buf[i] = w[i] * x[f * cfg.hop + i];
    const auto spec = dsp::rfft(buf);
    for (std::size_t b = 0; b < cfg.bands; ++b) {
      double s = 0;
      for (std::size_t k = lo[b]; k < hi[b]; ++k) s += std::norm(spec[k]);
      env[b][f] = std::sqrt(s);
    }
  }
  return env;
}

double estoi(const dsp::AudioSignal& clean, const dsp::AudioSignal& degraded,
             const EstoiConfig& cfg) {
  cfg.validate();
  if (clean.sample_rate != degraded.sample_rate)
    throw ConfigError("estoi: sample rates differ (" + std::to_string(clean.sample_rate) +
                      " vs " + std::to_string(degraded.sample_rate) + ")");
  const std::size_t n = std::min(clean.size(), degraded.size());
  dsp::AudioSignal a = clean, b = degraded;
  a.samples.resize(n);
  b.samples.resize(n);
  if (std::all_of(a.samples.begin(), a.samples.end(), [](double v) { return v == 0; }))
    throw ConfigError("estoi: reference signal is silent");
  auto x = dsp::resample(a, cfg.sample_rate).samples;
  auto y = dsp::resample(b, cfg.sample_rate).samples;
  remove_silent_frames(x, y, cfg);

  const auto ex = third_octave_envelopes(x, cfg);
  const auto ey = third_octave_envelopes(y, cfg);
  const std::size_t frames = ex.empty() ? 0 : ex[0].size();
  if (frames < cfg.segment) {
    std::ostringstream msg;
    msg << "estoi: signals too short after silence removal; need at least "
        << estoi_min_duration(cfg) << " s of non-silent audio";
    throw ConfigError(msg.str());
  }
  const std::size_t J = cfg.bands, N = cfg.segment;
  const std::size_t M = frames - N + 1;
  std::vector<double> sx(J * N), sy(J * N);
  double total = 0;
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t t = 0; t < N; ++t) {
        sx[j * N + t] = ex[j][m + t];
        sy[j * N + t] = ey[j][m + t];
      }
    row_col_normalize(sx, J, N);
    row_col_normalize(sy, J, N);
    for (std::size_t i = 0; i < J * N; ++i) total += sx[i] * sy[i];
  }
  return total / static_cast<double>(N * M);
}

}  // namespace lipmel::metrics
