// src/model/lipmel-model.h

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

#ifndef LIPMEL_MODEL_LIPMEL_MODEL_H_
#define LIPMEL_MODEL_LIPMEL_MODEL_H_

#include <string>
#include <utility>
#include <vector>

#include "base/rng.h"
#include "model/config.h"
#include "tensor/archive.h"
#include "tensor/layers.h"
#include "tensor/tensor.h"

namespace lipmel {

using NamedTensor = std::pair<std::string, Tensor>;

// What a forward pass does with the stochastic and batch-dependent parts.
struct RunMode {
  bool batch_stats = false;  // batch-norm on batch statistics (and update running ones)
  bool dropout = false;      // encoder dropout; prenet dropout is always on
  static RunMode train() { return {true, true}; }
  static RunMode eval() { return {false, false}; }
};

// Encoder output plus its precomputed memory projection M*h.
struct Memory {
  Tensor h;     // [n x d_enc]
  Tensor proj;  // [n x attention_dim]
  Index length() const { return h.dim(0); }
};

struct AttentionState {
  Tensor a_prev;   // [1 x n], previous alignment
  Tensor a_cum;    // [1 x n], sum of all alignments so far
  Tensor context;  // [1 x d_enc], previous context vector
  LstmState lstm;
};

struct AttentionOutput {
  Tensor context;    // v_t, [1 x d_enc]
  Tensor alignment;  // a_t, [1 x n]
  Tensor query;      // x, attention-LSTM output [1 x attention_lstm]
};

enum class StopReason { kPeriodDetected, kMaxSteps, kTargetLength };
const char* stop_reason_name(StopReason r);

struct DecoderOutput {
  Tensor dec;         // [m x n_mels] before the postnet
  Tensor post;        // [m x n_mels] after the residual postnet
  Tensor alignments;  // [m x n]
  StopReason stop_reason = StopReason::kTargetLength;
  Index steps() const { return dec.dim(0); }
};

struct TeacherForcing {
  // Probability of feeding the ground-truth previous frame at each step;
  // otherwise the model's own (detached) previous frame is used.
  double ratio = 1.0;
};

class LipMelModel {
 public:
  explicit LipMelModel(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }

  // Trainable tensors in a fixed order, sharing storage with the model.
  std::vector<NamedTensor> parameters() const;
  // Batch-norm running statistics.
  std::vector<NamedTensor> buffers() const;
  Index parameter_count() const;

  // frames [C x T x H x W] with H = W = frame_size -> Memory with n = T.
  Memory encode(const Tensor& frames, RunMode mode, Rng& rng);

  AttentionState initial_attention(const Memory& memory) const;
  LstmState initial_decoder() const;

  // Two ReLU layers, each followed by dropout(prenet_dropout).
  Tensor prenet(const Tensor& prev_frame, Rng& rng) const;

  // Attention LSTM, location features, energies, softmax and context.
  // Updates `state` in place.
  AttentionOutput attention_step(const Memory& memory, AttentionState& state,
                                 const Tensor& prenet_out) const;

  // Decoder LSTM over [v_t, x] and projection to one mel frame [1 x n_mels].
  Tensor decode_step(const Tensor& context, const Tensor& query,
                     LstmState& state) const;

  // dec [m x n_mels] -> dec + residual.
  Tensor postnet(const Tensor& dec, RunMode mode);

  DecoderOutput forward_teacher_forced(const Tensor& frames, const Tensor& target,
                                       RunMode mode, const TeacherForcing& tf,
                                       Rng& rng);

  // Free-running decode without recording a graph. Batch-norm uses running
  // statistics.
  DecoderOutput infer(const Tensor& frames, Rng& rng);

  void save(Archive& ar) const;
  // Throws ConfigError when the archive was written for another config.
  void load(const Archive& ar);

 private:
  struct EncoderBlock {
    Tensor weight, bias, gamma, beta;
    BatchNormStats stats;
  };
  struct PostnetLayer {
    Tensor weight, bias, gamma, beta;
    BatchNormStats stats;
  };

  std::vector<Tensor> bilstm_layer(const Tensor& x, const LstmWeights& fwd,
                                   const LstmWeights& bwd) const;

  ModelConfig cfg_;
  std::vector<EncoderBlock> blocks_;
  std::vector<std::pair<LstmWeights, LstmWeights>> encoder_lstm_;
  LstmWeights attention_lstm_;
  Tensor query_w_, memory_w_, location_conv_w_, location_w_, energy_w_;
  Tensor prenet1_w_, prenet1_b_, prenet2_w_, prenet2_b_;
  LstmWeights decoder_lstm_;
  Tensor projection_w_, projection_b_;
  std::vector<PostnetLayer> postnet_;
};

// MSE(dec, target) + MSE(post, target). Throws ShapeError on mismatch.
Tensor mel_loss(const Tensor& dec, const Tensor& post, const Tensor& target);

// Row sums of an alignment matrix, for invariant checks.
std::vector<Real> alignment_row_sums(const Tensor& alignments);

}  // namespace lipmel

#endif  // LIPMEL_MODEL_LIPMEL_MODEL_H_
