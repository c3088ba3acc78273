// src/train/trainer.cc

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

#include "train/trainer.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "base/error.h"
#include "data/batch.h"
#include "dsp/mel.h"
#include "json.hpp"
#include "tensor/ops.h"

namespace lipmel {

namespace {

using Json = nlohmann::ordered_json;

// Hex-float text keeps doubles exact across save and restore.
std::string encode_doubles(const std::vector<double>& v) {
  std::string s;
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%a ", x);
    s += buf;
  }
  return s;
}

std::vector<double> decode_doubles(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(std::strtod(tok.c_str(), nullptr));
  return out;
}

std::string encode_ints(const std::vector<std::int64_t>& v) {
  std::string s;
  for (auto x : v) s += std::to_string(x) + " ";
  return s;
}

std::vector<std::int64_t> decode_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  std::istringstream in(s);
  std::int64_t x;
  while (in >> x) out.push_back(x);
  return out;
}

}  // namespace

std::string format_step_log(const StepLog& log) {
  Json j;
  j["step"] = log.step;
  j["epoch"] = log.epoch;
  j["lr"] = log.lr;
  j["tf_ratio"] = log.tf_ratio;
  j["train_loss"] = log.train_loss;
  j["val_loss"] = log.val_loss ? Json(*log.val_loss) : Json(nullptr);
  j["grad_norm"] = log.grad_norm;
  j["clipped_grad_norm"] = log.clipped_grad_norm;
  return j.dump();
}

Trainer::Trainer(const ModelConfig& model_cfg, const TrainConfig& cfg,
                 std::vector<data::PreparedClip> train, std::vector<data::PreparedClip> val)
    : model_cfg_(model_cfg),
      cfg_(cfg),
      model_(model_cfg),
      adam_(cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps),
      rng_(cfg.seed),
      train_(std::move(train)),
      val_(std::move(val)) {
  cfg_.validate();
  if (train_.empty()) throw ConfigError("training set is empty");
  for (const auto& c : train_)
    if (c.mel.dim(1) != model_cfg_.n_mels)
      throw ShapeError("clip '" + c.id + "' has " + std::to_string(c.mel.dim(1)) +
                       " mel channels, model expects " + std::to_string(model_cfg_.n_mels));
}

Tensor pad_target(const Tensor& mel, Index pad) {
  const Index m = mel.dim(0), k = mel.dim(1);
  std::vector<Real> v(mel.data().begin(), mel.data().end());
  v.resize(static_cast<std::size_t>((m + pad) * k), static_cast<Real>(std::log(dsp::kMelClipFloor)));
  return Tensor::from({m + pad, k}, std::move(v));
}

double teacher_forced_loss(LipMelModel& model, const std::vector<data::PreparedClip>& clips,
                           Index pad, std::uint64_t seed) {
  NoGradGuard guard;
  Rng rng(seed);
  double sse = 0;
  Index total = 0;
  for (const auto& c : clips) {
    const Tensor target = pad_target(c.mel, pad);
    const DecoderOutput out =
        model.forward_teacher_forced(c.frames, target, RunMode::eval(), TeacherForcing{1.0}, rng);
    const Index n = target.dim(0);
    sse += mel_loss(out.dec, out.post, target).item() * static_cast<double>(n);
    total += n;
  }
  return sse / static_cast<double>(total);
}

Tensor Trainer::training_target(const Tensor& mel) const {
  return pad_target(mel, cfg_.stop_pad_frames);
}

std::vector<std::int64_t> Trainer::next_batch() {
  const auto n = static_cast<std::int64_t>(train_.size());
  if (state_.cursor >= static_cast<std::int64_t>(state_.order.size())) {
    state_.order.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) state_.order[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = n - 1; i > 0; --i)
      std::swap(state_.order[static_cast<std::size_t>(i)],
                state_.order[rng_.below(static_cast<std::uint64_t>(i + 1))]);
    state_.cursor = 0;
  }
  std::vector<std::int64_t> batch;
  while (static_cast<std::int64_t>(batch.size()) < cfg_.batch_size &&
         state_.cursor < static_cast<std::int64_t>(state_.order.size()))
    batch.push_back(state_.order[static_cast<std::size_t>(state_.cursor++)]);
  return batch;
}

StepLog Trainer::step() {
  if (finished()) throw ConfigError("training already finished");
  StepLog log;
  log.lr = cosine_lr(state_.step, cfg_);
  log.tf_ratio = teacher_forcing_ratio(state_.step, cfg_);

  std::vector<data::PreparedClip> clips;
  for (auto i : next_batch()) {
    data::PreparedClip c = train_[static_cast<std::size_t>(i)];
    if (cfg_.hflip_prob > 0) c.frames = data::augment_hflip(c.frames, cfg_.hflip_prob, rng_);
    c.mel = training_target(c.mel);
    clips.push_back(std::move(c));
  }
  std::vector<const data::PreparedClip*> ptrs;
  for (const auto& c : clips) ptrs.push_back(&c);
  const data::Batch batch = data::batch_collate(ptrs);

  const auto params = model_.parameters();
  for (auto [name, t] : params) t.zero_grad();
  Index total = 0;
  for (auto len : batch.mel_lengths) total += len;
  Tensor loss;
  for (Index b = 0; b < batch.size(); ++b) {
    const Tensor target = batch.clip_mel(b);
    const DecoderOutput out = model_.forward_teacher_forced(
        batch.clip_frames(b), target, RunMode::train(), TeacherForcing{log.tf_ratio}, rng_);
    // Weighting by clip length makes the sum a mean over all real entries.
    const Real w = static_cast<Real>(target.dim(0)) / static_cast<Real>(total);
    const Tensor term = ops::scale(mel_loss(out.dec, out.post, target), w);
    loss = b == 0 ? term : ops::add(loss, term);
  }
  log.train_loss = loss.item();
  if (!std::isfinite(log.train_loss)) {
    std::string ids;
    for (const auto& id : batch.ids) ids += (ids.empty() ? "" : ",") + id;
    throw NumericError("non-finite training loss on batch [" + ids + "]");
  }
  loss.backward();
  log.grad_norm = clip_gradients(params, cfg_.clip_norm);
  log.clipped_grad_norm = gradient_norm(params);
  adam_.step(params, log.lr);

  ++state_.step;
  log.step = state_.step;
  if (state_.cursor >= static_cast<std::int64_t>(state_.order.size())) {
    ++state_.epoch;
    if (!val_.empty()) {
      const double v = validation_loss();
      log.val_loss = v;
      state_.val_history.push_back(v);
      state_.best_val_loss = std::min(state_.best_val_loss, v);
      state_.stopped_early = early_stop(state_.val_history, cfg_.patience);
    }
  }
  log.epoch = state_.epoch;
  return log;
}

void Trainer::run(const std::function<void(const StepLog&)>& on_step) {
  while (!finished()) {
    const StepLog log = step();
    if (on_step) on_step(log);
  }
}

double Trainer::validation_loss() {
  if (val_.empty()) throw ConfigError("no validation clips");
  return teacher_forced_loss(model_, val_, cfg_.stop_pad_frames, cfg_.seed ^ 0x5eedULL);
}

Archive Trainer::checkpoint() const {
  Archive ar;
  model_.save(ar);
  adam_.save(ar);
  ar.put_bytes("train/config", cfg_.to_text());
  ar.put_i64("train/config_hash", static_cast<std::int64_t>(cfg_.hash()));
  ar.put_i64("state/step", state_.step);
  ar.put_i64("state/epoch", state_.epoch);
  ar.put_bytes("state/best_val_loss", encode_doubles({state_.best_val_loss}));
  ar.put_bytes("state/val_history", encode_doubles(state_.val_history));
  ar.put_bytes("state/order", encode_ints(state_.order));
  ar.put_i64("state/cursor", state_.cursor);
  ar.put_i64("state/stopped_early", state_.stopped_early ? 1 : 0);
  ar.put_bytes("state/rng", rng_.state());
  return ar;
}

void Trainer::save(const std::string& path) const { checkpoint().save(path); }

void Trainer::restore(const Archive& ar, bool allow_config_change) {
  if (!allow_config_change &&
      static_cast<std::uint64_t>(ar.get_i64("train/config_hash")) != cfg_.hash())
    throw ConfigError("checkpoint was written under a different training configuration");
  model_.load(ar);
  adam_.load(ar, model_.parameters());
  TrainState s;
  s.step = ar.get_i64("state/step");
  s.epoch = ar.get_i64("state/epoch");
  s.best_val_loss = decode_doubles(ar.get_bytes("state/best_val_loss")).at(0);
  s.val_history = decode_doubles(ar.get_bytes("state/val_history"));
  s.order = decode_ints(ar.get_bytes("state/order"));
  s.cursor = ar.get_i64("state/cursor");
  s.stopped_early = ar.get_i64("state/stopped_early") != 0;
  for (auto i : s.order)
    if (i < 0 || i >= static_cast<std::int64_t>(train_.size()))
      throw ConfigError("checkpoint epoch order does not match the training set");
  rng_.set_state(ar.get_bytes("state/rng"));
  state_ = s;
}

void Trainer::load_weights(const Archive& ar) {
  model_.load(ar);
  adam_ = Adam(cfg_.adam_beta1, cfg_.adam_beta2, cfg_.adam_eps);
  state_ = TrainState{};
}

}  // namespace lipmel
