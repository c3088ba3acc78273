// src/train/schedule.h

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

#ifndef LIPMEL_TRAIN_SCHEDULE_H_
#define LIPMEL_TRAIN_SCHEDULE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/kv-config.h"

namespace lipmel {

struct TrainConfig {
  double lr_initial = 0.001;
  std::int64_t total_steps = 1000;
  double clip_norm = 1.0;
  double tf_start = 1.0;  // teacher-forcing ratio at step 0
  double tf_end = 0.5;    // ratio at total_steps
  std::int64_t patience = 10;  // epochs without validation improvement
  std::int64_t batch_size = 4;
  std::uint64_t seed = 1;
  bool fine_tune = false;  // every lr scaled by 0.1
  std::int64_t stop_pad_frames = 4;  // silent frames appended to each target
  std::int64_t checkpoint_every = 0;  // 0: final checkpoint only
  double hflip_prob = 0.0;
  std::int64_t val_clips = 0;  // trailing manifest clips held out for validation
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // "train.*" keys.
  void read(const KvConfig& kv);
  void write(KvConfig& kv) const;
  static std::vector<std::string> keys();
  void validate() const;
  std::string to_text() const;
  static TrainConfig from_text(const std::string& text);
  // Hash of every field except fine_tune, which may change between a base
  // run and its fine-tuning continuation.
  std::uint64_t hash() const;
};

// lr_initial * 0.5 * (1 + cos(pi * step / total_steps)), step clamped to
// [0, total_steps], times 0.1 in fine-tune mode.
double cosine_lr(std::int64_t step, const TrainConfig& cfg);

// Linear from tf_start to tf_end over [0, total_steps], clamped.
double teacher_forcing_ratio(std::int64_t step, const TrainConfig& cfg);

// True iff the best loss has not improved by more than 1e-6 during the last
// `patience` entries.
bool early_stop(const std::vector<double>& history, std::int64_t patience);

}  // namespace lipmel

#endif  // LIPMEL_TRAIN_SCHEDULE_H_
