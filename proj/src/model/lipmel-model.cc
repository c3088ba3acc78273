// src/model/lipmel-model.cc

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

#include "model/lipmel-model.h"

#include <algorithm>

#include "tensor/conv.h"
#include "tensor/ops.h"

namespace lipmel {

namespace {

constexpr Real kConvGain = Real(5) / 3;

LstmWeights make_lstm(Index in, Index hidden, Rng& rng) {
  LstmWeights w;
  w.w_ih = xavier_uniform({4 * hidden, in}, 1, rng);
  w.w_hh = xavier_uniform({4 * hidden, hidden}, 1, rng);
  w.bias = Tensor::zeros({4 * hidden});
  return w;
}

void add_lstm(std::vector<NamedTensor>& out, const std::string& prefix,
              const LstmWeights& w) {
  out.emplace_back(prefix + ".w_ih", w.w_ih);
  out.emplace_back(prefix + ".w_hh", w.w_hh);
  out.emplace_back(prefix + ".bias", w.bias);
}

}  // namespace

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kPeriodDetected: return "period-detected";
    case StopReason::kMaxSteps: return "max-steps";
    case StopReason::kTargetLength: return "target-length";
  }
  return "unknown";
}

LipMelModel::LipMelModel(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(cfg_.seed);
  for (int b = 0; b < 3; ++b) {
    const ConvSpec spec = cfg_.conv_spec(b);
    EncoderBlock blk;
    blk.weight = xavier_uniform({spec.out_channels, spec.in_channels, spec.kernel[0],
                                 spec.kernel[1], spec.kernel[2]},
                                kConvGain, rng);
    blk.bias = Tensor::zeros({spec.out_channels});
    blk.gamma = Tensor::full({spec.out_channels}, 1);
    blk.beta = Tensor::zeros({spec.out_channels});
    blk.stats = BatchNormStats::identity(spec.out_channels);
    blocks_.push_back(blk);
  }
  Index in = cfg_.flatten_dim();
  for (Index l = 0; l < cfg_.encoder_layers; ++l) {
    auto fwd = make_lstm(in, cfg_.encoder_lstm, rng);
    auto bwd = make_lstm(in, cfg_.encoder_lstm, rng);
    encoder_lstm_.emplace_back(fwd, bwd);
    in = cfg_.encoder_dim();
  }
  const Index d = cfg_.encoder_dim(), A = cfg_.attention_dim;
  attention_lstm_ = make_lstm(d + cfg_.prenet_out, cfg_.attention_lstm, rng);
  query_w_ = xavier_uniform({A, cfg_.attention_lstm}, 1, rng);
  memory_w_ = xavier_uniform({A, d}, 1, rng);
  location_conv_w_ =
      xavier_uniform({cfg_.location_channels, 2, cfg_.location_kernel}, kConvGain, rng);
  location_w_ = xavier_uniform({A, cfg_.location_channels}, 1, rng);
  energy_w_ = xavier_uniform({1, A}, 1, rng);
  prenet1_w_ = xavier_uniform({cfg_.prenet_hidden, cfg_.n_mels}, 1, rng);
  prenet1_b_ = Tensor::zeros({cfg_.prenet_hidden});
  prenet2_w_ = xavier_uniform({cfg_.prenet_out, cfg_.prenet_hidden}, 1, rng);
  prenet2_b_ = Tensor::zeros({cfg_.prenet_out});
  decoder_lstm_ = make_lstm(d + cfg_.attention_lstm, cfg_.decoder_lstm, rng);
  projection_w_ = xavier_uniform({cfg_.n_mels, cfg_.decoder_lstm}, 1, rng);
  projection_b_ = Tensor::zeros({cfg_.n_mels});
  for (Index l = 0; l < cfg_.postnet_layers; ++l) {
    const bool last = l + 1 == cfg_.postnet_layers;
    const Index cin = l == 0 ? cfg_.n_mels : cfg_.postnet_channels;
    const Index cout = last ? cfg_.n_mels : cfg_.postnet_channels;
    PostnetLayer layer;
    // The last layer starts at zero so the postnet begins as the identity.
    layer.weight = last ? Tensor::zeros({cout, cin, cfg_.postnet_kernel})
                        : xavier_uniform({cout, cin, cfg_.postnet_kernel}, kConvGain, rng);
    layer.bias = Tensor::zeros({cout});
    if (!last) {
      layer.gamma = Tensor::full({cout}, 1);
      layer.beta = Tensor::zeros({cout});
      layer.stats = BatchNormStats::identity(cout);
    }
    postnet_.push_back(layer);
  }
  for (auto& [name, t] : parameters()) t.set_requires_grad(true);
}

std::vector<NamedTensor> LipMelModel::parameters() const {
  std::vector<NamedTensor> out;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::string p = "encoder.block" + std::to_string(b + 1);
    out.emplace_back(p + ".weight", blocks_[b].weight);
    out.emplace_back(p + ".bias", blocks_[b].bias);
    out.emplace_back(p + ".gamma", blocks_[b].gamma);
    out.emplace_back(p + ".beta", blocks_[b].beta);
  }
  for (std::size_t l = 0; l < encoder_lstm_.size(); ++l) {
    const std::string p = "encoder.lstm" + std::to_string(l + 1);
    add_lstm(out, p + ".fwd", encoder_lstm_[l].first);
    add_lstm(out, p + ".bwd", encoder_lstm_[l].second);
  }
  add_lstm(out, "attention.lstm", attention_lstm_);
  out.emplace_back("attention.query", query_w_);
  out.emplace_back("attention.memory", memory_w_);
  out.emplace_back("attention.location_conv", location_conv_w_);
  out.emplace_back("attention.location", location_w_);
  out.emplace_back("attention.energy", energy_w_);
  out.emplace_back("prenet.fc1.weight", prenet1_w_);
  out.emplace_back("prenet.fc1.bias", prenet1_b_);
  out.emplace_back("prenet.fc2.weight", prenet2_w_);
  out.emplace_back("prenet.fc2.bias", prenet2_b_);
  add_lstm(out, "decoder.lstm", decoder_lstm_);
  out.emplace_back("decoder.projection.weight", projection_w_);
  out.emplace_back("decoder.projection.bias", projection_b_);
  for (std::size_t l = 0; l < postnet_.size(); ++l) {
    const std::string p = "postnet.conv" + std::to_string(l + 1);
    out.emplace_back(p + ".weight", postnet_[l].weight);
    out.emplace_back(p + ".bias", postnet_[l].bias);
    if (postnet_[l].gamma.defined()) {
      out.emplace_back(p + ".gamma", postnet_[l].gamma);
      out.emplace_back(p + ".beta", postnet_[l].beta);
    }
  }
  return out;
}

std::vector<NamedTensor> LipMelModel::buffers() const {
  std::vector<NamedTensor> out;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::string p = "encoder.block" + std::to_string(b + 1);
    out.emplace_back(p + ".running_mean", blocks_[b].stats.mean);
    out.emplace_back(p + ".running_var", blocks_[b].stats.var);
  }
  for (std::size_t l = 0; l < postnet_.size(); ++l) {
    if (!postnet_[l].gamma.defined()) continue;
    const std::string p = "postnet.conv" + std::to_string(l + 1);
    out.emplace_back(p + ".running_mean", postnet_[l].stats.mean);
    out.emplace_back(p + ".running_var", postnet_[l].stats.var);
  }
  return out;
}

Index LipMelModel::parameter_count() const {
  Index n = 0;
  for (const auto& [name, t] : parameters()) n += t.numel();
  return n;
}

std::vector<Tensor> LipMelModel::bilstm_layer(const Tensor& x, const LstmWeights& fwd,
                                              const LstmWeights& bwd) const {
  const Index T = x.dim(0);
  auto run = [&](const LstmWeights& w, bool reverse) {
    const Tensor gates = ops::linear(x, w.w_ih, w.bias);
    LstmState s = LstmState::zeros(w.hidden());
    std::vector<Tensor> hs(static_cast<std::size_t>(T));
    for (Index i = 0; i < T; ++i) {
      const Index t = reverse ? T - 1 - i : i;
      s = ops::lstm_cell_projected(ops::slice(gates, 0, t, 1), s, w);
      hs[static_cast<std::size_t>(t)] = s.h;
    }
    return ops::concat(hs, 0);
  };
  return {run(fwd, false), run(bwd, true)};
}

Memory LipMelModel::encode(const Tensor& frames, RunMode mode, Rng& rng) {
  if (frames.ndim() != 4 || frames.dim(0) != cfg_.input_channels ||
      frames.dim(2) != cfg_.frame_size || frames.dim(3) != cfg_.frame_size)
    throw ShapeError("encode: expected [" + std::to_string(cfg_.input_channels) + "xTx" +
                     std::to_string(cfg_.frame_size) + "x" +
                     std::to_string(cfg_.frame_size) + "] frames, got " +
                     shape_str(frames.shape()));
  if (frames.dim(1) < 1) throw ShapeError("encode: no frames");
  Tensor x = frames;
  for (int b = 0; b < 3; ++b) {
    auto& blk = blocks_[static_cast<std::size_t>(b)];
    x = ops::conv3d(x, cfg_.conv_spec(b), blk.weight, blk.bias);
    x = ops::batchnorm(x, blk.gamma, blk.beta, blk.stats, mode.batch_stats);
    x = ops::relu(x);
    x = ops::maxpool3d(x, cfg_.pool_spec(b));
    x = ops::dropout(x, cfg_.encoder_dropout, rng, mode.dropout);
  }
  x = ops::channels_to_time(x);
  for (const auto& [fwd, bwd] : encoder_lstm_) {
    const auto dirs = bilstm_layer(x, fwd, bwd);
    x = ops::concat(dirs, 1);
  }
  Memory m;
  m.h = x;
  m.proj = ops::linear(x, memory_w_);
  return m;
}

AttentionState LipMelModel::initial_attention(const Memory& memory) const {
  const Index n = memory.length();
  AttentionState s;
  std::vector<Real> one_hot(static_cast<std::size_t>(n), 0);
  one_hot[0] = 1;
  s.a_prev = Tensor::from({1, n}, one_hot);
  s.a_cum = Tensor::zeros({1, n});
  s.context = Tensor::zeros({1, cfg_.encoder_dim()});
  s.lstm = LstmState::zeros(cfg_.attention_lstm);
  return s;
}

LstmState LipMelModel::initial_decoder() const { return LstmState::zeros(cfg_.decoder_lstm); }

Tensor LipMelModel::prenet(const Tensor& prev_frame, Rng& rng) const {
  const bool on = cfg_.prenet_dropout > 0;
  Tensor x = ops::relu(ops::linear(prev_frame, prenet1_w_, prenet1_b_));
  x = ops::dropout(x, cfg_.prenet_dropout, rng, on);
  x = ops::relu(ops::linear(x, prenet2_w_, prenet2_b_));
  return ops::dropout(x, cfg_.prenet_dropout, rng, on);
}

AttentionOutput LipMelModel::attention_step(const Memory& memory, AttentionState& state,
                                            const Tensor& prenet_out) const {
  const Index n = memory.length();
  state.lstm = ops::lstm_cell(ops::concat({state.context, prenet_out}, 1), state.lstm,
                              attention_lstm_);
  const Tensor query = state.lstm.h;
  const Tensor loc = ops::conv1d(ops::concat({state.a_prev, state.a_cum}, 0),
                                 location_conv_w_, Tensor(), 1, cfg_.location_kernel / 2);
  const Tensor loc_proj = ops::linear(ops::transpose(loc), location_w_);
  const Tensor q = ops::linear(query, query_w_);
  const Tensor hidden = ops::tanh(ops::add_row(ops::add(memory.proj, loc_proj), q));
  const Tensor energies = ops::reshape(ops::linear(hidden, energy_w_), {1, n});
  const Tensor a = ops::softmax(energies, 1);
  const Tensor v = ops::matmul(a, memory.h);
  state.a_cum = ops::add(state.a_cum, a);
  state.a_prev = a;
  state.context = v;
  return {v, a, query};
}

Tensor LipMelModel::decode_step(const Tensor& context, const Tensor& query,
                                LstmState& state) const {
  state = ops::lstm_cell(ops::concat({context, query}, 1), state, decoder_lstm_);
  return ops::linear(state.h, projection_w_, projection_b_);
}

Tensor LipMelModel::postnet(const Tensor& dec, RunMode mode) {
  if (dec.ndim() != 2 || dec.dim(1) != cfg_.n_mels)
    throw ShapeError("postnet: expected [m x " + std::to_string(cfg_.n_mels) + "], got " +
                     shape_str(dec.shape()));
  Tensor x = ops::transpose(dec);
  for (auto& layer : postnet_) {
    x = ops::conv1d(x, layer.weight, layer.bias, 1, cfg_.postnet_kernel / 2);
    if (layer.gamma.defined())
      x = ops::tanh(ops::batchnorm(x, layer.gamma, layer.beta, layer.stats, mode.batch_stats));
  }
  return ops::add(dec, ops::transpose(x));
}

DecoderOutput LipMelModel::forward_teacher_forced(const Tensor& frames, const Tensor& target,
                                                  RunMode mode, const TeacherForcing& tf,
                                                  Rng& rng) {
  if (target.ndim() != 2 || target.dim(1) != cfg_.n_mels || target.dim(0) < 1)
    throw ShapeError("teacher forcing: target must be [m x " + std::to_string(cfg_.n_mels) +
                     "] with m >= 1, got " + shape_str(target.shape()));
  const Memory memory = encode(frames, mode, rng);
  AttentionState att = initial_attention(memory);
  LstmState dec_state = initial_decoder();
  const Index m = target.dim(0);
  std::vector<Tensor> out, rows;
  Tensor prev = Tensor::zeros({1, cfg_.n_mels});
  for (Index t = 0; t < m; ++t) {
    if (t > 0) {
      const bool truth = rng.uniform() < tf.ratio;
      prev = truth ? ops::slice(target, 0, t - 1, 1).detach() : out.back().detach();
    }
    const auto a = attention_step(memory, att, prenet(prev, rng));
    out.push_back(decode_step(a.context, a.query, dec_state));
    rows.push_back(a.alignment);
  }
  DecoderOutput o;
  o.dec = ops::concat(out, 0);
  o.post = postnet(o.dec, mode);
  o.alignments = ops::concat(rows, 0);
  o.stop_reason = StopReason::kTargetLength;
  return o;
}

DecoderOutput LipMelModel::infer(const Tensor& frames, Rng& rng) {
  NoGradGuard no_grad;
  const RunMode mode = RunMode::eval();
  const Memory memory = encode(frames, mode, rng);
  const Index n = memory.length();
  AttentionState att = initial_attention(memory);
  LstmState dec_state = initial_decoder();
  std::vector<Tensor> out, rows;
  Tensor prev = Tensor::zeros({1, cfg_.n_mels});
  DecoderOutput o;
  o.stop_reason = StopReason::kMaxSteps;
  Index run = 0;
  for (Index t = 0; t < cfg_.max_decoder_steps; ++t) {
    const auto a = attention_step(memory, att, prenet(prev, rng));
    prev = decode_step(a.context, a.query, dec_state);
    out.push_back(prev);
    rows.push_back(a.alignment);
    run = a.alignment.data()[static_cast<std::size_t>(n - 1)] > cfg_.stop_threshold ? run + 1 : 0;
    if (run >= cfg_.stop_consecutive) {
      o.stop_reason = StopReason::kPeriodDetected;
      break;
    }
  }
  o.dec = ops::concat(out, 0);
  o.post = postnet(o.dec, mode);
  o.alignments = ops::concat(rows, 0);
  return o;
}

void LipMelModel::save(Archive& ar) const {
  ar.config_hash = cfg_.hash();
  ar.config_text = cfg_.to_text();
  for (const auto& [name, t] : parameters()) ar.put_tensor("param/" + name, t);
  for (const auto& [name, t] : buffers()) ar.put_tensor("buffer/" + name, t);
}

void LipMelModel::load(const Archive& ar) {
  if (ar.config_hash != cfg_.hash())
    throw ConfigError("checkpoint was written for a different model configuration");
  auto copy_into = [&](const std::string& key, Tensor t) {
    const Tensor src = ar.get_tensor(key);
    if (src.shape() != t.shape())
      throw ShapeError("checkpoint entry '" + key + "' has shape " + shape_str(src.shape()) +
                       ", expected " + shape_str(t.shape()));
    std::copy(src.data().begin(), src.data().end(), t.mutable_data().begin());
  };
  for (const auto& [name, t] : parameters()) copy_into("param/" + name, t);
  for (const auto& [name, t] : buffers()) copy_into("buffer/" + name, t);
}

Tensor mel_loss(const Tensor& dec, const Tensor& post, const Tensor& target) {
  if (dec.shape() != target.shape() || post.shape() != target.shape())
    throw ShapeError("mel_loss: shapes " + shape_str(dec.shape()) + ", " +
                     shape_str(post.shape()) + " vs target " + shape_str(target.shape()));
  return ops::add(ops::mse(dec, target), ops::mse(post, target));
}

std::vector<Real> alignment_row_sums(const Tensor& alignments) {
  const Index m = alignments.dim(0), n = alignments.dim(1);
  std::vector<Real> sums(static_cast<std::size_t>(m), 0);
  auto d = alignments.data();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) sums[static_cast<std::size_t>(i)] += d[i * n + j];
  return sums;
}

}  // namespace lipmel
