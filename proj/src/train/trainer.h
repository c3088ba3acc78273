// src/train/trainer.h

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

#ifndef LIPMEL_TRAIN_TRAINER_H_
#define LIPMEL_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "base/rng.h"
#include "data/preprocess.h"
#include "model/lipmel-model.h"
#include "tensor/archive.h"
#include "train/optimizer.h"
#include "train/schedule.h"

namespace lipmel {

struct TrainState {
  std::int64_t step = 0;   // completed optimizer updates
  std::int64_t epoch = 0;  // completed passes over the training clips
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::vector<double> val_history;
  std::vector<std::int64_t> order;  // clip order of the current epoch
  std::int64_t cursor = 0;          // next position in `order`
  bool stopped_early = false;
};

struct StepLog {
  std::int64_t step = 0;  // 1-based index of the update
  std::int64_t epoch = 0;
  double lr = 0;
  double tf_ratio = 0;
  double train_loss = 0;
  std::optional<double> val_loss;  // set on steps that close an epoch
  double grad_norm = 0;            // before clipping
  double clipped_grad_norm = 0;    // after clipping
};

// Mel target followed by `pad` rows at the log-mel floor.
Tensor pad_target(const Tensor& mel, Index pad);

// Teacher-forced loss (ratio 1, eval mode, no graph) averaged over every
// target entry of `clips`, each padded with `pad` silent frames.
double teacher_forced_loss(LipMelModel& model, const std::vector<data::PreparedClip>& clips,
                           Index pad, std::uint64_t seed);

// One JSON object, no trailing newline.
std::string format_step_log(const StepLog& log);

class Trainer {
 public:
  Trainer(const ModelConfig& model_cfg, const TrainConfig& cfg,
          std::vector<data::PreparedClip> train,
          std::vector<data::PreparedClip> val = {});

  LipMelModel& model() { return model_; }
  const LipMelModel& model() const { return model_; }
  const TrainConfig& config() const { return cfg_; }
  const TrainState& state() const { return state_; }

  bool finished() const { return state_.step >= cfg_.total_steps || state_.stopped_early; }

  // Mel target followed by stop_pad_frames rows at the log-mel floor.
  Tensor training_target(const Tensor& mel) const;

  // One optimizer update on the next batch. Throws NumericError (naming
  // the batch clip ids or the parameter) without changing parameters.
  StepLog step();

  // Steps until finished(); calls `on_step` after every update.
  void run(const std::function<void(const StepLog&)>& on_step = {});

  // Teacher-forced loss over the validation clips, eval mode.
  double validation_loss();

  Archive checkpoint() const;
  void save(const std::string& path) const;
  // Restores parameters, optimizer moments, rng and schedule position.
  // Refuses a checkpoint from a different training configuration unless
  // `allow_config_change` is set. The model configuration must match.
  void restore(const Archive& ar, bool allow_config_change = false);
  // Loads parameters only and keeps a fresh training state.
  void load_weights(const Archive& ar);

 private:
  std::vector<std::int64_t> next_batch();

  ModelConfig model_cfg_;
  TrainConfig cfg_;
  LipMelModel model_;
  Adam adam_;
  Rng rng_;
  TrainState state_;
  std::vector<data::PreparedClip> train_;
  std::vector<data::PreparedClip> val_;
};

}  // namespace lipmel

#endif  // LIPMEL_TRAIN_TRAINER_H_
