// tests/dsp-test.cc

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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "base/rng.h"
#include "doctest.h"
#include "dsp/mel.h"
#include "dsp/resample.h"
#include "dsp/spectral.h"

using namespace lipmel;
using namespace lipmel::dsp;

namespace {

std::vector<double> sine(double hz, double amp, std::size_t n, int sr = 16000) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2 * M_PI * hz * i / sr);
  return x;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed, double amp = 0.5) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-amp, amp);
  return x;
}

// Harmonic source with slow pitch and amplitude movement plus a little noise.
std::vector<double> speech_like(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  double phase = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 16000;
    const double f0 = 140 + 30 * std::sin(2 * M_PI * 3 * t);
    phase += 2 * M_PI * f0 / 16000;
    const double env = 0.6 + 0.4 * std::sin(2 * M_PI * 4 * t);
    double s = 0;
    for (int h = 1; h <= 8; ++h) s += std::sin(h * phase) / h;
    x[i] = env * s * 0.3 + rng.uniform(-0.01, 0.01);
  }
  return x;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("normalize") {
  AudioSignal a;
  a.samples = {0.5, -0.25};
  const auto n = normalize(a);
  CHECK(n.samples == std::vector<double>{1.0, -0.5});
  a.samples = {0, 0, 0};
  CHECK(normalize(a).samples == a.samples);
  a.samples = noise(1000, 3);
  double peak = 0;
  for (double v : normalize(a).samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == 1.0);
  a.samples.clear();
  CHECK_THROWS_AS(normalize(a), ConfigError);
}

TEST_CASE("stft frame count and bin-centred tone") {
  const StftConfig cfg;
  CHECK(cfg.bins() == 513);
  const auto x = sine(32 * 16000.0 / 1024, 0.8, 8000);
  const auto s = magnitude(stft(x, cfg));
  CHECK(s.frames == 1 + 8000 / 256);
  for (std::size_t t = 3; t + 3 < s.frames; ++t) {
    std::vector<double> row(s.values.begin() + t * 513, s.values.begin() + (t + 1) * 513);
    const auto peak = std::max_element(row.begin(), row.end()) - row.begin();
    CHECK(peak == 32);
    CHECK(20 * std::log10(row[32] / median(row)) >= 20);
  }
}

TEST_CASE("stft of silence is zero") {
  const auto s = magnitude(stft(std::vector<double>(3000, 0.0), StftConfig{}));
  for (double v : s.values) CHECK(v == 0);
}

TEST_CASE("stft satisfies Parseval per frame") {
  const StftConfig cfg;
  const auto x = noise(6000, 9);
  const auto s = stft(x, cfg);
  const auto w = hann_window(1024);
  for (std::size_t t : {2u, 7u, 15u}) {
    double energy = 0;
    for (std::size_t i = 0; i < 1024; ++i) {
      const double v = w[i] * x[t * 256 - 512 + i];
      energy += v * v;
    }
    double spec = std::norm(s.at(t, 0)) + std::norm(s.at(t, 512));
    for (std::size_t k = 1; k < 512; ++k) spec += 2 * std::norm(s.at(t, k));
    spec /= 1024;
    CHECK(std::abs(spec - energy) / energy < 1e-6);
  }
}

TEST_CASE("istft round trip, linearity and silence") {
  const StftConfig cfg;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (std::size_t n : {4 * 256u, 5000u, 7777u}) {
      const auto x = noise(n, seed);
      const auto y = istft(stft(x, cfg), cfg, n);
      REQUIRE(y.size() == n);
      double err = 0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - y[i]));
      CHECK(err < 1e-6);
    }
  }
  auto spec = stft(noise(3000, 5), cfg);
  const auto base = istft(spec, cfg);
  for (auto& c : spec.values) c *= 2.0;
  const auto doubled = istft(spec, cfg);
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(doubled[i] == doctest::Approx(2 * base[i]).epsilon(1e-12));
  ComplexSpectrogram zero(6, 513);
  for (double v : istft(zero, cfg)) CHECK(v == 0);
}

TEST_CASE("istft rejects uncovered samples") {
  StftConfig cfg;
  cfg.hop = 1024;
  const auto spec = stft(noise(5000, 1), cfg);
  CHECK_THROWS_AS(istft(spec, cfg), ConfigError);
  StftConfig bad;
  bad.hop = 2048;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("mel scale values") {
  CHECK(hz_to_mel(0) == 0);
  CHECK(hz_to_mel(700) == doctest::Approx(2595 * std::log10(2.0)));
  CHECK(hz_to_mel(700) == doctest::Approx(781.17).epsilon(1e-5));
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
}

TEST_CASE("mel filterbank structure") {
  const auto fb = mel_filterbank(StftConfig{});
  CHECK(fb.n_mels == 80);
  CHECK(fb.bins == 513);
  CHECK(fb.weights.size() == 80 * 513);
  for (std::size_t m = 1; m < 80; ++m) CHECK(fb.centers_hz[m] > fb.centers_hz[m - 1]);
  for (std::size_t m = 0; m < 80; ++m) {
    // Non-negative and unimodal: non-decreasing then non-increasing.
    bool descending = false;
    for (std::size_t k = 0; k < 513; ++k) {
      CHECK(fb.at(m, k) >= 0);
      if (k == 0) continue;
      if (fb.at(m, k) < fb.at(m, k - 1)) descending = true;
      if (descending) CHECK(fb.at(m, k) <= fb.at(m, k - 1));
    }
  }
  const double bin_hz = 16000.0 / 1024;
  for (std::size_t k = 0; k < 513; ++k) {
    const double f = k * bin_hz;
    if (f < fb.centers_hz.front() || f > fb.centers_hz.back()) continue;
    double total = 0;
    for (std::size_t m = 0; m < 80; ++m) total += fb.at(m, k);
    CHECK(total > 0);
  }
  CHECK_THROWS_AS(mel_filterbank(StftConfig{}, 80, 0, 9000), ConfigError);
}

TEST_CASE("log mel floor and tone placement") {
  const StftConfig cfg;
  const auto fb = mel_filterbank(cfg);
  AudioSignal silence;
  silence.samples.assign(16000, 0.0);
  const auto z = log_mel(silence, cfg, fb);
  CHECK(z.frames == 63);
  for (double v : z.values) CHECK(v == kLogMelFloor);
  CHECK(kLogMelFloor == doctest::Approx(-11.5129).epsilon(1e-5));

  AudioSignal rnd;
  rnd.samples = noise(5000, 4, 1e-9);
  for (double v : log_mel(rnd, cfg, fb).values) CHECK(v >= kLogMelFloor);

  AudioSignal tone;
  tone.samples = sine(1000, 1.0, 8000);
  const auto m = log_mel(tone, cfg, fb);
  // Channel whose centre is nearest the tone.
  std::size_t band = 0;
  for (std::size_t c = 0; c < 80; ++c)
    if (std::abs(fb.centers_hz[c] - 1000) < std::abs(fb.centers_hz[band] - 1000)) band = c;
  for (std::size_t t = 3; t + 3 < m.frames; ++t) {
    std::vector<double> row(m.values.begin() + t * 80, m.values.begin() + (t + 1) * 80);
    CHECK(row[band] - median(row) > 3);
  }
}

TEST_CASE("mel pseudo-inverse") {
  const StftConfig cfg;
  const auto fb = mel_filterbank(cfg);
  Rng rng(12);
  MagnitudeSpectrogram m(4, 513);
  for (double& v : m.values) v = rng.uniform(0, 2);
  const auto mel = apply_filterbank(m, fb);
  const auto back = apply_filterbank(mel_to_linear(mel, fb, false), fb);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < mel.values.size(); ++i) {
    num += std::pow(back.values[i] - mel.values[i], 2);
    den += mel.values[i] * mel.values[i];
  }
  CHECK(std::sqrt(num / den) < 1e-6);
  for (double v : mel_to_linear(mel, fb).values) CHECK(v >= 0);
  MelSpectrogram zero(3, 80);
  for (double v : mel_to_linear(zero, fb).values) CHECK(v == 0);
}

TEST_CASE("griffin-lim improves consistency and is deterministic") {
  const StftConfig cfg;
  const auto x = speech_like(12000, 8);
  const auto target = magnitude(stft(x, cfg));
  const std::size_t len = x.size();
  const auto one = griffin_lim(target, cfg, {1, len});
  const auto sixty = griffin_lim(target, cfg, {60, len});
  // griffin_lim peak-normalises; compare at matched scale.
  auto rescaled = [&](const AudioSignal& a) {
    double peak = 0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    std::vector<double> s = a.samples;
    for (double& v : s) v *= peak;
    return s;
  };
  const double e1 = spectral_convergence(rescaled(one), target, cfg);
  const double e60 = spectral_convergence(rescaled(sixty), target, cfg);
  MESSAGE("spectral convergence: 1 iter " << e1 << ", 60 iters " << e60);
  CHECK(e60 < e1);
  const auto again = griffin_lim(target, cfg, {60, len});
  CHECK(again.samples == sixty.samples);
  CHECK_THROWS_AS(griffin_lim(target, cfg, {0, len}), ConfigError);
}

TEST_CASE("griffin-lim on silence and on a pure tone") {
  const StftConfig cfg;
  MagnitudeSpectrogram zero(20, 513);
  for (double v : griffin_lim(zero, cfg, {}).samples) CHECK(v == 0);

  const double hz = 937.5;
  const auto target = magnitude(stft(sine(hz, 0.5, 16000), cfg));
  const auto y = griffin_lim(target, cfg, {});
  const auto spec = rfft(y.samples);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < spec.size(); ++k)
    if (std::abs(spec[k]) > std::abs(spec[peak])) peak = k;
  const double found = peak * 16000.0 / y.samples.size();
  CHECK(std::abs(found - hz) <= 16000.0 / 1024);
}

TEST_CASE("wav and matrix files round trip") {
  AudioSignal a;
  a.samples = noise(1234, 6, 0.9);
  const auto b = decode_wav(encode_wav(a));
  CHECK(b.sample_rate == 16000);
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a.samples[i] - b.samples[i]) < 1.0 / 32767);
  // Decoding then re-encoding is exact.
  CHECK(encode_wav(b) == encode_wav(a));
  CHECK_THROWS_AS(decode_wav({'R', 'I', 'F', 'F'}), ParseError);

  MatrixFile m;
  m.rows = 3;
  m.cols = 80;
  for (std::size_t i = 0; i < 240; ++i) m.values.push_back(static_cast<float>(i) * 0.5f - 7);
  const std::string path = "dsp-test-matrix.bin";
  write_matrix(path, m);
  const auto r = read_matrix(path);
  CHECK(r.rows == 3);
  CHECK(r.cols == 80);
  CHECK(r.values == m.values);
  std::remove(path.c_str());
}

TEST_CASE("rational resampling keeps tone frequency and level") {
  AudioSignal a;
  a.samples = sine(1000, 0.7, 16000);
  const auto r = resample(a, 10000);
  CHECK(r.sample_rate == 10000);
  CHECK(r.samples.size() == 10000);
  double err = 0;
  for (std::size_t i = 200; i < 9800; ++i)
    err = std::max(err, std::abs(r.samples[i] - 0.7 * std::sin(2 * M_PI * 1000 * i / 10000.0)));
  CHECK(err < 1e-3);
}
