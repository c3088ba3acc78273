// tests/train-test.cc

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

#include <cmath>
#include <filesystem>
#include <limits>

#include "base/error.h"
#include "base/rng.h"
#include "doctest.h"
#include "json.hpp"
#include "tensor/ops.h"
#include "train/optimizer.h"
#include "train/schedule.h"
#include "train/trainer.h"

using namespace lipmel;

namespace {

data::PreparedClip micro_clip(const std::string& id, Index frames, Index mel_frames, Rng& rng) {
  data::PreparedClip c;
  c.id = id;
  std::vector<Real> f(static_cast<std::size_t>((frames + 1) * 64));
  for (Real& v : f) v = rng.uniform();
  c.frames = Tensor::from({1, frames + 1, 8, 8}, f);
  std::vector<Real> m(static_cast<std::size_t>(mel_frames * 8));
  for (Real& v : m) v = rng.uniform(-3, 1);
  c.mel = Tensor::from({mel_frames, 8}, m);
  return c;
}

std::vector<data::PreparedClip> micro_set(std::uint64_t seed = 5) {
  Rng rng(seed);
  return {micro_clip("a", 3, 4, rng), micro_clip("b", 2, 3, rng), micro_clip("c", 4, 5, rng)};
}

TrainConfig micro_train(std::int64_t steps = 10) {
  TrainConfig t;
  t.total_steps = steps;
  t.batch_size = 2;
  t.stop_pad_frames = 2;
  return t;
}

std::vector<Real> flat_params(const LipMelModel& m) {
  std::vector<Real> out;
  for (const auto& [name, t] : m.parameters()) out.insert(out.end(), t.data().begin(), t.data().end());
  for (const auto& [name, t] : m.buffers()) out.insert(out.end(), t.data().begin(), t.data().end());
  return out;
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lipmel-train-test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("cosine learning rate") {
  TrainConfig c;
  c.total_steps = 1000;
  CHECK(cosine_lr(0, c) == 0.001);
  CHECK(cosine_lr(1000, c) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(cosine_lr(1000, c)) < 1e-18);
  CHECK(cosine_lr(500, c) == doctest::Approx(0.0005).epsilon(1e-12));
  CHECK(cosine_lr(-5, c) == cosine_lr(0, c));
  CHECK(cosine_lr(2000, c) == cosine_lr(1000, c));
  for (std::int64_t s = 1; s <= 1000; ++s) CHECK(cosine_lr(s, c) <= cosine_lr(s - 1, c));
  TrainConfig ft = c;
  ft.fine_tune = true;
  CHECK(cosine_lr(0, ft) == 0.1 * 0.001);
  for (std::int64_t s = 0; s <= 1000; s += 37) CHECK(cosine_lr(s, ft) == cosine_lr(s, c) * 0.1);
}

TEST_CASE("teacher forcing schedule") {
  TrainConfig c;
  c.total_steps = 200;
  CHECK(teacher_forcing_ratio(0, c) == 1.0);
  CHECK(teacher_forcing_ratio(200, c) == 0.5);
  CHECK(teacher_forcing_ratio(100, c) == doctest::Approx(0.75));
  for (std::int64_t s = 1; s <= 200; ++s)
    CHECK(teacher_forcing_ratio(s, c) <= teacher_forcing_ratio(s - 1, c));
}

TEST_CASE("early stopping rule") {
  CHECK_FALSE(early_stop({5, 4, 3, 2, 1}, 2));
  CHECK(early_stop({1, 1, 1, 1}, 3));
  CHECK_FALSE(early_stop({1, 1, 1}, 3));
  const std::vector<double> h = {1.0, 0.9, 0.91, 0.92, 0.93};
  for (std::size_t n = 1; n <= 4; ++n) CHECK_FALSE(early_stop({h.begin(), h.begin() + n}, 3));
  CHECK(early_stop(h, 3));
  CHECK_FALSE(early_stop({1.0, 1.0 - 5e-7, 0.5}, 1));
  CHECK(early_stop({1.0, 1.0 - 5e-7}, 1));
}

TEST_CASE("gradient clipping") {
  auto grad_param = [](const std::string& name, std::vector<Real> g) {
    Tensor t = Tensor::zeros({static_cast<Index>(g.size())});
    auto dst = t.mutable_grad();
    std::copy(g.begin(), g.end(), dst.begin());
    return NamedTensor{name, t};
  };
  const auto one = std::vector<NamedTensor>{grad_param("w", {3, 4})};
  CHECK(clip_gradients(one, 1.0) == doctest::Approx(5.0));
  CHECK(one[0].second.grad()[0] == doctest::Approx(0.6));
  CHECK(one[0].second.grad()[1] == doctest::Approx(0.8));
  CHECK(gradient_norm(one) <= 1.0 + 1e-12);

  const auto small = std::vector<NamedTensor>{grad_param("a", {0.3}), grad_param("b", {0.4})};
  CHECK(clip_gradients(small, 1.0) == doctest::Approx(0.5));
  CHECK(small[0].second.grad()[0] == Real(0.3));
  CHECK(small[1].second.grad()[0] == Real(0.4));

  const auto zeros = std::vector<NamedTensor>{grad_param("z", {0, 0, 0})};
  CHECK(clip_gradients(zeros, 1.0) == 0.0);

  Rng rng(2);
  std::vector<NamedTensor> many;
  for (int i = 0; i < 5; ++i) {
    std::vector<Real> g(7);
    for (Real& v : g) v = rng.uniform(-10, 10);
    many.push_back(grad_param("p" + std::to_string(i), g));
  }
  clip_gradients(many, 1.0);
  CHECK(gradient_norm(many) <= 1.0 + 1e-6);

  const auto bad = std::vector<NamedTensor>{grad_param("ok", {1}),
                                            grad_param("broken", {std::numeric_limits<Real>::quiet_NaN()})};
  try {
    clip_gradients(bad, 1.0);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("broken") != std::string::npos);
  }
}

TEST_CASE("adam matches a scalar oracle") {
  Tensor w = Tensor::from({2}, {1.0, -2.0});
  const std::vector<NamedTensor> params = {{"w", w}};
  Adam adam(0.9, 0.999, 1e-8);
  double m[2] = {0, 0}, v[2] = {0, 0}, x[2] = {1.0, -2.0};
  const double grads[3][2] = {{0.5, -1.0}, {0.25, 2.0}, {-0.1, 0.0}};
  const double lrs[3] = {0.01, 0.005, 0.001};
  for (int t = 0; t < 3; ++t) {
    auto g = w.mutable_grad();
    g[0] = grads[t][0];
    g[1] = grads[t][1];
    adam.step(params, lrs[t]);
    for (int k = 0; k < 2; ++k) {
      m[k] = 0.9 * m[k] + 0.1 * grads[t][k];
      v[k] = 0.999 * v[k] + 0.001 * grads[t][k] * grads[t][k];
      const double mh = m[k] / (1 - std::pow(0.9, t + 1)), vh = v[k] / (1 - std::pow(0.999, t + 1));
      x[k] -= lrs[t] * mh / (std::sqrt(vh) + 1e-8);
      CHECK(w.data()[static_cast<std::size_t>(k)] == doctest::Approx(x[k]).epsilon(1e-12));
    }
  }
  // First step moves each weight by lr against the gradient's sign.
  Tensor u = Tensor::from({1}, {0.0});
  u.mutable_grad()[0] = 123;
  Adam fresh;
  fresh.step({{"u", u}}, 0.001);
  CHECK(u.data()[0] == doctest::Approx(-0.001).epsilon(1e-6));
}

TEST_CASE("training target carries silent stop frames") {
  Trainer tr(ModelConfig::micro(), micro_train(), micro_set());
  const Tensor mel = Tensor::from({2, 8}, std::vector<Real>(16, 0.5));
  const Tensor t = tr.training_target(mel);
  CHECK(t.shape() == Shape{4, 8});
  CHECK(t.at({1, 7}) == 0.5);
  CHECK(t.at({2, 0}) == Real(std::log(1e-5)));
  CHECK(t.at({3, 7}) == Real(std::log(1e-5)));
}

TEST_CASE("fresh model gives equal decoder and postnet terms") {
  LipMelModel model(ModelConfig::micro());
  Rng rng(1);
  const auto clips = micro_set();
  const Tensor zeros = Tensor::zeros({5, 8});
  const DecoderOutput out =
      model.forward_teacher_forced(clips[2].frames, zeros, RunMode::train(), TeacherForcing{1.0}, rng);
  const Real a = ops::mse(out.dec, zeros).item(), b = ops::mse(out.post, zeros).item();
  CHECK(a == b);
  CHECK(mel_loss(out.dec, out.post, zeros).item() == doctest::Approx(2 * a));
}

TEST_CASE("training reduces loss and logs the recipe") {
  TrainConfig cfg = micro_train(60);
  cfg.batch_size = 3;
  cfg.tf_end = 1.0;
  cfg.lr_initial = 0.03;
  Trainer tr(ModelConfig::micro(), cfg, micro_set());
  std::vector<StepLog> logs;
  tr.run([&](const StepLog& l) { logs.push_back(l); });
  REQUIRE(logs.size() == 60);
  CHECK(tr.finished());
  CHECK(logs[0].lr == 0.03);
  CHECK(logs[0].step == 1);
  CHECK(logs[0].epoch == 1);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    CHECK(logs[i].lr == cosine_lr(static_cast<std::int64_t>(i), cfg));
    CHECK(logs[i].clipped_grad_norm <= 1.0 + 1e-6);
    CHECK(logs[i].clipped_grad_norm == doctest::Approx(std::min(1.0, logs[i].grad_norm)));
  }
  CHECK(logs.back().train_loss < 0.5 * logs[0].train_loss);
  const auto j = nlohmann::ordered_json::parse(format_step_log(logs[0]));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"step", "epoch", "lr", "tf_ratio", "train_loss", "val_loss",
                                         "grad_norm", "clipped_grad_norm"});
  CHECK(j["val_loss"].is_null());
}

TEST_CASE("training is deterministic") {
  auto run = [] {
    Trainer tr(ModelConfig::micro(), micro_train(6), micro_set());
    std::vector<double> losses;
    tr.run([&](const StepLog& l) { losses.push_back(l.train_loss); });
    return std::make_pair(losses, flat_params(tr.model()));
  };
  const auto a = run(), b = run();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("fine-tune logs a tenth of the base learning rate") {
  TrainConfig base = micro_train(8), ft = base;
  ft.fine_tune = true;
  Trainer a(ModelConfig::micro(), base, micro_set()), b(ModelConfig::micro(), ft, micro_set());
  std::vector<double> la, lb;
  a.run([&](const StepLog& l) { la.push_back(l.lr); });
  b.run([&](const StepLog& l) { lb.push_back(l.lr); });
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(lb[i] == la[i] * 0.1);
}

TEST_CASE("checkpoint resume is bitwise") {
  TrainConfig cfg = micro_train(10);
  cfg.hflip_prob = 0.5;
  Trainer full(ModelConfig::micro(), cfg, micro_set());
  std::vector<double> full_losses;
  full.run([&](const StepLog& l) { full_losses.push_back(l.train_loss); });

  Trainer first(ModelConfig::micro(), cfg, micro_set());
  for (int i = 0; i < 5; ++i) first.step();
  const std::string path = scratch("resume.ckpt");
  first.save(path);

  Trainer second(ModelConfig::micro(), cfg, micro_set());
  second.restore(Archive::load(path));
  CHECK(second.state().step == 5);
  std::vector<double> tail;
  second.run([&](const StepLog& l) { tail.push_back(l.train_loss); });
  CHECK(std::vector<double>(full_losses.begin() + 5, full_losses.end()) == tail);
  CHECK(flat_params(second.model()) == flat_params(full.model()));
  CHECK(second.checkpoint().serialize() == full.checkpoint().serialize());

  // save -> restore -> save is byte-identical.
  Trainer again(ModelConfig::micro(), cfg, micro_set());
  again.restore(Archive::load(path));
  CHECK(again.checkpoint().serialize() == read_file_bytes(path));
}

TEST_CASE("restore validates configuration") {
  Trainer a(ModelConfig::micro(), micro_train(4), micro_set());
  a.step();
  const Archive ar = a.checkpoint();

  TrainConfig other = micro_train(4);
  other.lr_initial = 0.01;
  Trainer b(ModelConfig::micro(), other, micro_set());
  CHECK_THROWS_AS(b.restore(ar), ConfigError);
  b.restore(ar, true);
  CHECK(b.state().step == 1);

  TrainConfig ft = micro_train(4);
  ft.fine_tune = true;
  Trainer c(ModelConfig::micro(), ft, micro_set());
  c.restore(ar);

  ModelConfig mc = ModelConfig::micro();
  mc.decoder_lstm = 6;
  Trainer d(mc, micro_train(4), micro_set());
  CHECK_THROWS_AS(d.restore(ar, true), ConfigError);

  Trainer e(ModelConfig::micro(), micro_train(4), micro_set());
  e.load_weights(ar);
  CHECK(e.state().step == 0);
  CHECK(flat_params(e.model()) == flat_params(a.model()));
}

TEST_CASE("validation loss and early stopping") {
  TrainConfig cfg = micro_train(200);
  cfg.batch_size = 3;
  cfg.patience = 1;
  cfg.lr_initial = 1e-12;
  Rng rng(9);
  Trainer tr(ModelConfig::micro(), cfg, micro_set(), {micro_clip("v", 3, 4, rng)});
  std::vector<StepLog> logs;
  tr.run([&](const StepLog& l) { logs.push_back(l); });
  CHECK(tr.state().stopped_early);
  CHECK(logs.size() < 200);
  REQUIRE(logs[0].val_loss.has_value());
  CHECK(std::isfinite(*logs[0].val_loss));
  CHECK(tr.validation_loss() == tr.validation_loss());
}

TEST_CASE("non-finite loss names the batch") {
  TrainConfig cfg = micro_train(4);
  cfg.batch_size = 3;
  Trainer tr(ModelConfig::micro(), cfg, micro_set());
  Tensor w = tr.model().parameters()[0].second;
  w.mutable_data()[0] = std::numeric_limits<Real>::quiet_NaN();
  try {
    tr.step();
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("a") != std::string::npos);
    CHECK(msg.find("b") != std::string::npos);
    CHECK(msg.find("c") != std::string::npos);
  }
  CHECK(tr.state().step == 0);
}

TEST_CASE("train config round trip") {
  TrainConfig c;
  c.total_steps = 77;
  c.fine_tune = true;
  c.hflip_prob = 0.25;
  const TrainConfig d = TrainConfig::from_text(c.to_text());
  CHECK(d.to_text() == c.to_text());
  CHECK(d.hash() == c.hash());
  TrainConfig e = c;
  e.fine_tune = false;
  CHECK(e.hash() == c.hash());
  CHECK_THROWS_AS(TrainConfig::from_text("train.bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(TrainConfig::from_text("train.total_steps = 0\n"), ConfigError);
}
