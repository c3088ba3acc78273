// src/dsp/mel.cc

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

#include "dsp/mel.h"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <string>

namespace lipmel::dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank mel_filterbank(const StftConfig& cfg, std::size_t n_mels,
                             double f_min, double f_max) {
  cfg.validate();
  if (n_mels == 0) throw ConfigError("mel filterbank needs at least one filter");
  if (!(f_min >= 0 && f_min < f_max && f_max <= cfg.sample_rate / 2.0))
    throw ConfigError("mel filterbank requires 0 <= f_min < f_max <= sr/2");
  MelFilterbank fb;
  fb.n_mels = n_mels;
  fb.bins = cfg.bins();
  fb.f_min = f_min;
  fb.f_max = f_max;
  const double m_lo = hz_to_mel(f_min), m_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_mels + 1));
  fb.centers_hz.assign(edges.begin() + 1, edges.end() - 1);
  fb.weights.assign(n_mels * fb.bins, 0.0);
  const double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.fft_size;
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], c = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < fb.bins; ++k) {
      const double f = k * bin_hz;
      const double up = (f - lo) / (c - lo);
      const double down = (hi - f) / (hi - c);
      fb.weights[m * fb.bins + k] = std::max(0.0, std::min(up, down));
    }
  }
  return fb;
}

MelSpectrogram apply_filterbank(const MagnitudeSpectrogram& mag,
                                const MelFilterbank& fb) {
  if (mag.bins != fb.bins)
    throw ShapeError("filterbank expects " + std::to_string(fb.bins) +
                     " bins, got " + std::to_string(mag.bins));
  MelSpectrogram out(mag.frames, fb.n_mels);
  for (std::size_t t = 0; t < mag.frames; ++t)
    for (std::size_t m = 0; m < fb.n_mels; ++m) {
      double s = 0;
      const double* w = fb.weights.data() + m * fb.bins;
      const double* x = mag.values.data() + t * mag.bins;
      for (std::size_t k = 0; k < fb.bins; ++k) s += w[k] * x[k];
      out.at(t, m) = s;
    }
  return out;
}

MelSpectrogram log_mel(const AudioSignal& audio, const StftConfig& cfg,
                       const MelFilterbank& fb) {
  MelSpectrogram mel = apply_filterbank(magnitude(stft(audio.samples, cfg)), fb);
  for (double& v : mel.values) v = std::log(std::max(v, kMelClipFloor));
  return mel;
}

MelSpectrogram exp_mel(const MelSpectrogram& log_mel) {
  MelSpectrogram out = log_mel;
  for (double& v : out.values) v = std::exp(v);
  return out;
}

MagnitudeSpectrogram mel_to_linear(const MelSpectrogram& mel_energy,
                                   const MelFilterbank& fb, bool clamp) {
  if (mel_energy.bins != fb.n_mels)
    throw ShapeError("mel_to_linear: expected " + std::to_string(fb.n_mels) +
                     " channels, got " + std::to_string(mel_energy.bins));
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const Mat> F(fb.weights.data(),
                                static_cast<Eigen::Index>(fb.n_mels),
                                static_cast<Eigen::Index>(fb.bins));
  const Mat gram = F * F.transpose();
  const Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error("mel_to_linear: filterbank Gram matrix is singular");
  const Eigen::Map<const Mat> M(mel_energy.values.data(),
                                static_cast<Eigen::Index>(mel_energy.frames),
                                static_cast<Eigen::Index>(fb.n_mels));
  // Each row s_t = m_t (F F^T)^-1 F.
  const Mat coeff = llt.solve(M.transpose()).transpose();
  const Mat lin = coeff * F;
  MagnitudeSpectrogram out(mel_energy.frames, fb.bins);
  for (std::size_t t = 0; t < out.frames; ++t)
    for (std::size_t k = 0; k < out.bins; ++k) {
      const double v = lin(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
      out.at(t, k) = clamp ? std::max(v, 0.0) : v;
    }
  return out;
}

}  // namespace lipmel::dsp
