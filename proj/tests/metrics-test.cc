// tests/metrics-test.cc

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
#include <functional>
#include <sstream>

#include "base/rng.h"
#include "doctest.h"
#include "dsp/mel.h"
#include "json.hpp"
#include "metrics/edit-distance.h"
#include "metrics/estoi.h"
#include "metrics/mel-mse.h"
#include "metrics/report.h"

using namespace lipmel;
using namespace lipmel::metrics;

namespace {

// Minimum over every edit script, by plain recursion with no table.
std::size_t brute_distance(const std::vector<int>& a, std::size_t i,
                           const std::vector<int>& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = brute_distance(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, brute_distance(a, i, b, j + 1) + 1);
  best = std::min(best, brute_distance(a, i + 1, b, j) + 1);
  return best;
}

std::vector<std::vector<int>> all_sequences(std::size_t max_len, int alphabet) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier)
      for (int c = 0; c < alphabet; ++c) {
        auto t = s;
        t.push_back(c);
        next.push_back(t);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier.swap(next);
  }
  return out;
}

dsp::AudioSignal voiced(double seconds, std::uint64_t seed) {
  Rng rng(seed);
  dsp::AudioSignal a;
  const std::size_t n = static_cast<std::size_t>(seconds * 16000);
  a.samples.resize(n);
  double phase = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 16000;
    phase += 2 * M_PI * (120 + 40 * std::sin(2 * M_PI * 2.5 * t)) / 16000;
    const double env = std::max(0.0, std::sin(2 * M_PI * 3 * t));
    double s = 0;
    for (int h = 1; h <= 12; ++h) s += std::sin(h * phase) / h;
    a.samples[i] = 0.3 * env * s + rng.uniform(-0.003, 0.003);
  }
  return a;
}

dsp::AudioSignal white(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  dsp::AudioSignal a;
  a.samples.resize(n);
  for (double& v : a.samples) v = rng.uniform(-0.3, 0.3);
  return a;
}

}  // namespace

TEST_CASE("edit distance examples") {
  const auto ref = split_words("set blue in Z three now");
  auto ops = edit_distance(ref, ref);
  CHECK(ops.distance() == 0);
  const auto hyp = split_words("set blue in Z now");
  ops = edit_distance(ref, hyp);
  CHECK(ops.deletions == 1);
  CHECK(ops.substitutions == 0);
  CHECK(ops.insertions == 0);
  CHECK(ops.ref_len == 6);
}

TEST_CASE("edit distance matches exhaustive search") {
  const auto seqs = all_sequences(4, 3);
  CHECK(seqs.size() == 121);
  for (const auto& a : seqs)
    for (const auto& b : seqs) {
      const auto ops = edit_distance(a, b);
      REQUIRE(ops.distance() == brute_distance(a, 0, b, 0));
      REQUIRE(a.size() - ops.deletions + ops.insertions == b.size());
    }
}

TEST_CASE("edit distance tie-break prefers substitution") {
  // "ab" -> "ba": two substitutions rather than an insertion/deletion pair.
  const auto ops = edit_distance(std::vector<int>{0, 1}, std::vector<int>{1, 0});
  CHECK(ops.substitutions == 2);
  CHECK(ops.deletions + ops.insertions == 0);
}

TEST_CASE("edit distance triangle inequality") {
  Rng rng(4);
  auto random_seq = [&] {
    std::vector<int> s(rng.below(7));
    for (int& v : s) v = static_cast<int>(rng.below(4));
    return s;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_seq(), b = random_seq(), c = random_seq();
    CHECK(edit_distance(a, c).distance() <=
          edit_distance(a, b).distance() + edit_distance(b, c).distance());
  }
}

TEST_CASE("word and character error rates") {
  CHECK(wer_cer("bin blue at f two now", "bin blue at f two now", Unit::kWord) == 0.0);
  CHECK(wer_cer("a b c d", "", Unit::kWord) == 1.0);
  CHECK(wer_cer("abc", "axc", Unit::kChar) == doctest::Approx(1.0 / 3));
  CHECK(wer_cer("a", "b c d", Unit::kWord) == 3.0);
  // Spaces are ignored at character level; code points count once.
  CHECK(wer_cer("a b", "ab", Unit::kChar) == 0.0);
  CHECK(split_chars("h\xc3\xa9 \xe2\x82\xac").size() == 3);
  CHECK_THROWS_AS(wer_cer("", "x", Unit::kWord), ConfigError);
  CHECK_THROWS_AS(wer_cer("   ", "x", Unit::kChar), ConfigError);
  for (const char* s : {"x", "lay red with q one soon", "place"}) {
    CHECK(wer_cer(s, s, Unit::kWord) == 0.0);
    CHECK(wer_cer(s, s, Unit::kChar) == 0.0);
  }
}

TEST_CASE("mel mse") {
  Rng rng(2);
  dsp::MelSpectrogram a(7, 80), b(7, 80);
  for (double& v : a.values) v = rng.uniform(-5, 1);
  for (double& v : b.values) v = rng.uniform(-5, 1);
  CHECK(mel_mse(a, a) == 0.0);
  auto shifted = a;
  for (double& v : shifted.values) v += 0.25;
  CHECK(mel_mse(a, shifted) == doctest::Approx(0.0625).epsilon(1e-12));
  double s = 0;
  for (std::size_t t = 0; t < 7; ++t)
    for (std::size_t c = 0; c < 80; ++c) s += std::pow(a.at(t, c) - b.at(t, c), 2);
  CHECK(std::abs(mel_mse(a, b) - s / 560) < 1e-10);
  CHECK(mel_mse(a, b) > 0);
  dsp::MelSpectrogram longer(9, 80);
  std::copy(a.values.begin(), a.values.end(), longer.values.begin());
  CHECK(mel_mse(a, longer) == 0.0);
  CHECK_THROWS_AS(mel_mse(a, dsp::MelSpectrogram(7, 40)), ShapeError);
}

TEST_CASE("estoi band layout") {
  const EstoiConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.center_hz(0) == 150);
  for (std::size_t k = 0; k < cfg.bands; ++k) {
    CHECK(cfg.low_hz(k) < cfg.center_hz(k));
    CHECK(cfg.center_hz(k) < cfg.high_hz(k));
    CHECK(cfg.high_hz(k) < 5000);
  }
  EstoiConfig bad;
  bad.bands = 25;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("estoi identity, sign, gain and noise") {
  const auto x = voiced(2.0, 1);
  CHECK(estoi(x, x) == doctest::Approx(1.0).epsilon(1e-6));
  auto neg = x;
  for (double& v : neg.samples) v = -v;
  CHECK(std::abs(estoi(x, neg) - estoi(x, x)) < 1e-6);

  auto noisy = x;
  const auto n = white(x.size(), 9);
  for (std::size_t i = 0; i < x.size(); ++i) noisy.samples[i] += 0.3 * n.samples[i];
  const double base = estoi(x, noisy);
  auto scaled = noisy;
  for (double& v : scaled.samples) v *= 3.7;
  CHECK(std::abs(estoi(x, scaled) - base) < 1e-6);
  const double pure_noise = estoi(x, white(x.size(), 10));
  MESSAGE("estoi noisy " << base << ", white noise " << pure_noise);
  CHECK(pure_noise < base);
  CHECK(base < 1.0);
  CHECK(pure_noise < 0.2);
}

TEST_CASE("estoi rejects short or mismatched input") {
  const auto x = voiced(0.2, 1);
  CHECK_THROWS_WITH_AS(estoi(x, x), doctest::Contains("at least"), ConfigError);
  auto y = voiced(1.0, 2);
  auto z = y;
  z.sample_rate = 8000;
  CHECK_THROWS_AS(estoi(y, z), ConfigError);
  // Silence in the reference leaves nothing to score.
  dsp::AudioSignal quiet;
  quiet.samples.assign(16000, 0.0);
  CHECK_THROWS_AS(estoi(quiet, y), ConfigError);
}

TEST_CASE("griffin-lim vocoding keeps intelligibility above noise") {
  const auto x = voiced(1.5, 3);
  const dsp::StftConfig cfg;
  const auto fb = dsp::mel_filterbank(cfg);
  const auto mel = dsp::exp_mel(dsp::log_mel(dsp::normalize(x), cfg, fb));
  const auto y = dsp::griffin_lim(dsp::mel_to_linear(mel, fb), cfg, {60, x.size()});
  const double vocoded = estoi(x, y);
  const double noise = estoi(x, white(x.size(), 3));
  MESSAGE("estoi vocoded " << vocoded << ", noise " << noise);
  CHECK(vocoded > noise);
}

TEST_CASE("evaluation report layout and summary") {
  std::vector<EvalRow> rows(3);
  rows[0] = {"a", 0.5, 0.1, 0.0, 0.0, "ok"};
  rows[1] = {"b", 0.7, 0.3, std::nullopt, std::nullopt, "ok"};
  rows[2] = {"c", std::nullopt, std::nullopt, std::nullopt, std::nullopt, "missing hypothesis"};
  const auto text = format_report(rows);
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);
  CHECK(lines[1].rfind("{\"clip_id\":\"a\",\"estoi\":0.5,\"mel_mse\":0.1,\"wer\":0.0,", 0) == 0);
  const auto summary = nlohmann::json::parse(lines[4]);
  CHECK(summary["record"] == "summary");
  CHECK(summary["failed"] == 1);
  CHECK(std::abs(summary["estoi"].get<double>() - 0.6) < 1e-9);
  CHECK(std::abs(summary["mel_mse"].get<double>() - 0.2) < 1e-9);
  CHECK(nlohmann::json::parse(lines[3])["estoi"].is_null());
  CHECK(format_report({}).find('\n') == format_report({}).size() - 1);
}
