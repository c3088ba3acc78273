// src/train/schedule.cc

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

#include "train/schedule.h"

#include <algorithm>
#include <cmath>
#include <locale>
#include <sstream>

#include "base/error.h"
#include "tensor/archive.h"

namespace lipmel {

void TrainConfig::read(const KvConfig& kv) {
  lr_initial = kv.get_double("train.lr_initial", lr_initial);
  total_steps = kv.get_int("train.total_steps", total_steps);
  clip_norm = kv.get_double("train.clip_norm", clip_norm);
  tf_start = kv.get_double("train.tf_start", tf_start);
  tf_end = kv.get_double("train.tf_end", tf_end);
  patience = kv.get_int("train.patience", patience);
  batch_size = kv.get_int("train.batch_size", batch_size);
  seed = static_cast<std::uint64_t>(kv.get_int("train.seed", static_cast<std::int64_t>(seed)));
  fine_tune = kv.get_bool("train.fine_tune", fine_tune);
  stop_pad_frames = kv.get_int("train.stop_pad_frames", stop_pad_frames);
  checkpoint_every = kv.get_int("train.checkpoint_every", checkpoint_every);
  hflip_prob = kv.get_double("train.hflip_prob", hflip_prob);
  val_clips = kv.get_int("train.val_clips", val_clips);
  adam_beta1 = kv.get_double("train.adam_beta1", adam_beta1);
  adam_beta2 = kv.get_double("train.adam_beta2", adam_beta2);
  adam_eps = kv.get_double("train.adam_eps", adam_eps);
}

void TrainConfig::write(KvConfig& kv) const {
  auto put = [&](const char* key, auto v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << std::boolalpha << v;
    kv.set(std::string("train.") + key, s.str());
  };
  put("lr_initial", lr_initial);
  put("total_steps", total_steps);
  put("clip_norm", clip_norm);
  put("tf_start", tf_start);
  put("tf_end", tf_end);
  put("patience", patience);
  put("batch_size", batch_size);
  put("seed", seed);
  put("fine_tune", fine_tune);
  put("stop_pad_frames", stop_pad_frames);
  put("checkpoint_every", checkpoint_every);
  put("hflip_prob", hflip_prob);
  put("val_clips", val_clips);
  put("adam_beta1", adam_beta1);
  put("adam_beta2", adam_beta2);
  put("adam_eps", adam_eps);
}

std::vector<std::string> TrainConfig::keys() {
  KvConfig kv;
  TrainConfig().write(kv);
  std::vector<std::string> out;
  for (const auto& [k, v] : kv.values()) out.push_back(k);
  return out;
}

void TrainConfig::validate() const {
  if (!(lr_initial > 0)) throw ConfigError("train.lr_initial must be positive");
  if (total_steps < 1) throw ConfigError("train.total_steps must be at least 1");
  if (!(clip_norm > 0)) throw ConfigError("train.clip_norm must be positive");
  if (tf_start < 0 || tf_start > 1 || tf_end < 0 || tf_end > 1)
    throw ConfigError("train.tf_start and train.tf_end must lie in [0, 1]");
  if (patience < 1) throw ConfigError("train.patience must be at least 1");
  if (batch_size < 1) throw ConfigError("train.batch_size must be at least 1");
  if (stop_pad_frames < 0) throw ConfigError("train.stop_pad_frames must be non-negative");
  if (checkpoint_every < 0) throw ConfigError("train.checkpoint_every must be non-negative");
  if (hflip_prob < 0 || hflip_prob > 1) throw ConfigError("train.hflip_prob must lie in [0, 1]");
  if (val_clips < 0) throw ConfigError("train.val_clips must be non-negative");
  if (!(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 && adam_beta2 < 1))
    throw ConfigError("train.adam_beta1 and train.adam_beta2 must lie in [0, 1)");
  if (!(adam_eps > 0)) throw ConfigError("train.adam_eps must be positive");
}

std::string TrainConfig::to_text() const {
  KvConfig kv;
  write(kv);
  return kv.to_string();
}

TrainConfig TrainConfig::from_text(const std::string& text) {
  const KvConfig kv = KvConfig::parse(text, "train config");
  kv.require_known(keys());
  TrainConfig c;
  c.read(kv);
  c.validate();
  return c;
}

std::uint64_t TrainConfig::hash() const {
  TrainConfig c = *this;
  c.fine_tune = false;
  return fnv1a64(c.to_text());
}

double cosine_lr(std::int64_t step, const TrainConfig& cfg) {
  const std::int64_t s = std::clamp<std::int64_t>(step, 0, cfg.total_steps);
  const double frac = static_cast<double>(s) / static_cast<double>(cfg.total_steps);
  const double lr = cfg.lr_initial * 0.5 * (1.0 + std::cos(M_PI * frac));
  return cfg.fine_tune ? lr * 0.1 : lr;
}

double teacher_forcing_ratio(std::int64_t step, const TrainConfig& cfg) {
  const std::int64_t s = std::clamp<std::int64_t>(step, 0, cfg.total_steps);
  const double frac = static_cast<double>(s) / static_cast<double>(cfg.total_steps);
  return cfg.tf_start + (cfg.tf_end - cfg.tf_start) * frac;
}

bool early_stop(const std::vector<double>& history, std::int64_t patience) {
  if (patience < 1 || static_cast<std::int64_t>(history.size()) <= patience) return false;
  double best = history[0];
  std::int64_t since = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i] < best - 1e-6) {
      best = history[i];
      since = 0;
    } else {
      ++since;
    }
  }
  return since >= patience;
}

}  // namespace lipmel
