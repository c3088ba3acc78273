// src/model/config.cc

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

#include "model/config.h"

#include <sstream>

#include "base/error.h"
#include "tensor/archive.h"

namespace lipmel {

namespace {

std::string join3(const std::array<Index, 3>& a) {
  return std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]);
}

void read3(const KvConfig& kv, const std::string& key, std::array<Index, 3>& out) {
  if (!kv.has(key)) return;
  const auto v = kv.get_ints(key, {});
  if (v.size() != 3) throw ConfigError("config key '" + key + "' needs three values");
  for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
}

const char* kBlockFields[] = {"channels", "kernel", "stride", "padding", "pool_window",
                              "pool_stride"};

const char* kScalarKeys[] = {
    "model.input_channels", "model.frame_size", "model.encoder_lstm",
    "model.encoder_layers", "model.attention_lstm", "model.attention_dim",
    "model.location_channels", "model.location_kernel", "model.prenet_hidden",
    "model.prenet_out", "model.decoder_lstm", "model.n_mels",
    "model.postnet_channels", "model.postnet_layers", "model.postnet_kernel",
    "model.encoder_dropout", "model.prenet_dropout", "model.max_decoder_steps",
    "model.stop_threshold", "model.stop_consecutive", "model.seed"};

std::string block_key(int b, const char* field) {
  return "model.block" + std::to_string(b + 1) + "." + field;
}

}  // namespace

ModelConfig::ModelConfig() {
  blocks[0].channels = 32;
  blocks[1].channels = 64;
  blocks[2].channels = 128;
  blocks[2].stride = {1, 1, 1};
}

ModelConfig ModelConfig::standard() { return ModelConfig(); }

ModelConfig ModelConfig::reduced() {
  ModelConfig c;
  c.blocks[0].channels = 8;
  c.blocks[1].channels = 16;
  c.blocks[2].channels = 32;
  c.encoder_lstm = 64;
  c.attention_lstm = 128;
  c.attention_dim = 16;
  c.location_channels = 8;
  c.prenet_hidden = 64;
  c.prenet_out = 32;
  c.decoder_lstm = 128;
  c.postnet_channels = 64;
  c.max_decoder_steps = 300;
  return c;
}

ModelConfig ModelConfig::micro() {
  ModelConfig c;
  c.frame_size = 8;
  const Index channels[3] = {2, 2, 4};
  for (int b = 0; b < 3; ++b) {
    auto& blk = c.blocks[static_cast<std::size_t>(b)];
    blk.channels = channels[b];
    blk.kernel = {3, 3, 3};
    blk.stride = {1, 1, 1};
    blk.padding = {1, 1, 1};
    blk.pool_window = {1, 2, 2};
    blk.pool_stride = {1, 2, 2};
  }
  c.blocks[0].padding = {1, 0, 0};
  c.blocks[1].pool_window = {1, 1, 1};
  c.blocks[1].pool_stride = {1, 1, 1};
  c.encoder_lstm = 4;
  c.attention_lstm = 8;
  c.attention_dim = 8;
  c.location_channels = 2;
  c.location_kernel = 3;
  c.prenet_hidden = 8;
  c.prenet_out = 8;
  c.decoder_lstm = 8;
  c.n_mels = 8;
  c.postnet_channels = 8;
  c.postnet_kernel = 3;
  c.encoder_dropout = 0;
  c.prenet_dropout = 0;
  c.max_decoder_steps = 20;
  return c;
}

ConvSpec ModelConfig::conv_spec(int block) const {
  const auto& b = blocks.at(static_cast<std::size_t>(block));
  ConvSpec s;
  s.kernel = b.kernel;
  s.stride = b.stride;
  s.padding = b.padding;
  s.in_channels = block == 0 ? input_channels : blocks[static_cast<std::size_t>(block) - 1].channels;
  s.out_channels = b.channels;
  return s;
}

PoolSpec ModelConfig::pool_spec(int block) const {
  const auto& b = blocks.at(static_cast<std::size_t>(block));
  PoolSpec p;
  p.window = b.pool_window;
  p.stride = b.pool_stride;
  return p;
}

std::vector<Index> ModelConfig::spatial_trace() const {
  std::vector<Index> trace{frame_size};
  std::array<Index, 3> extent{1, frame_size, frame_size};
  for (int b = 0; b < 3; ++b) {
    extent = conv_spec(b).output_extent(extent);
    trace.push_back(extent[1]);
    extent = pool_spec(b).output_extent(extent);
    trace.push_back(extent[1]);
  }
  return trace;
}

Index ModelConfig::flatten_dim() const {
  const Index side = spatial_trace().back();
  return blocks[2].channels * side * side;
}

void ModelConfig::validate() const {
  auto positive = [](Index v, const char* name) {
    if (v < 1) throw ConfigError(std::string("model.") + name + " must be positive");
  };
  positive(input_channels, "input_channels");
  positive(frame_size, "frame_size");
  positive(encoder_lstm, "encoder_lstm");
  positive(encoder_layers, "encoder_layers");
  positive(attention_lstm, "attention_lstm");
  positive(attention_dim, "attention_dim");
  positive(location_channels, "location_channels");
  positive(location_kernel, "location_kernel");
  positive(prenet_hidden, "prenet_hidden");
  positive(prenet_out, "prenet_out");
  positive(decoder_lstm, "decoder_lstm");
  positive(n_mels, "n_mels");
  positive(postnet_channels, "postnet_channels");
  positive(postnet_layers, "postnet_layers");
  positive(postnet_kernel, "postnet_kernel");
  positive(max_decoder_steps, "max_decoder_steps");
  positive(stop_consecutive, "stop_consecutive");
  if (location_kernel % 2 == 0 || postnet_kernel % 2 == 0)
    throw ConfigError("location and postnet kernels must be odd to keep lengths");
  if (postnet_layers < 2) throw ConfigError("model.postnet_layers must be at least 2");
  for (double p : {encoder_dropout, prenet_dropout})
    if (!(p >= 0 && p < 1)) throw ConfigError("dropout probabilities must lie in [0, 1)");
  if (!(stop_threshold > 0 && stop_threshold < 1))
    throw ConfigError("model.stop_threshold must lie in (0, 1)");
  for (int b = 0; b < 3; ++b) {
    const auto& blk = blocks[static_cast<std::size_t>(b)];
    positive(blk.channels, "blockN.channels");
    if (blk.stride[0] != 1 || 2 * blk.padding[0] + 1 != blk.kernel[0] ||
        blk.pool_window[0] != 1 || blk.pool_stride[0] != 1)
      throw ConfigError("encoder block " + std::to_string(b + 1) +
                        " must preserve the time length");
  }
  (void)spatial_trace();  // throws if any stage collapses
}

void ModelConfig::read(const KvConfig& kv) {
  auto geti = [&](const char* key, Index& v) { v = kv.get_int(std::string("model.") + key, v); };
  geti("input_channels", input_channels);
  geti("frame_size", frame_size);
  geti("encoder_lstm", encoder_lstm);
  geti("encoder_layers", encoder_layers);
  geti("attention_lstm", attention_lstm);
  geti("attention_dim", attention_dim);
  geti("location_channels", location_channels);
  geti("location_kernel", location_kernel);
  geti("prenet_hidden", prenet_hidden);
  geti("prenet_out", prenet_out);
  geti("decoder_lstm", decoder_lstm);
  geti("n_mels", n_mels);
  geti("postnet_channels", postnet_channels);
  geti("postnet_layers", postnet_layers);
  geti("postnet_kernel", postnet_kernel);
  geti("max_decoder_steps", max_decoder_steps);
  geti("stop_consecutive", stop_consecutive);
  encoder_dropout = kv.get_double("model.encoder_dropout", encoder_dropout);
  prenet_dropout = kv.get_double("model.prenet_dropout", prenet_dropout);
  stop_threshold = kv.get_double("model.stop_threshold", stop_threshold);
  seed = static_cast<std::uint64_t>(kv.get_int("model.seed", static_cast<std::int64_t>(seed)));
  for (int b = 0; b < 3; ++b) {
    auto& blk = blocks[static_cast<std::size_t>(b)];
    blk.channels = kv.get_int(block_key(b, "channels"), blk.channels);
    read3(kv, block_key(b, "kernel"), blk.kernel);
    read3(kv, block_key(b, "stride"), blk.stride);
    read3(kv, block_key(b, "padding"), blk.padding);
    read3(kv, block_key(b, "pool_window"), blk.pool_window);
    read3(kv, block_key(b, "pool_stride"), blk.pool_stride);
  }
}

void ModelConfig::write(KvConfig& kv) const {
  auto put = [&](const char* key, auto v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << v;
    kv.set(std::string("model.") + key, s.str());
  };
  put("input_channels", input_channels);
  put("frame_size", frame_size);
  put("encoder_lstm", encoder_lstm);
  put("encoder_layers", encoder_layers);
  put("attention_lstm", attention_lstm);
  put("attention_dim", attention_dim);
  put("location_channels", location_channels);
  put("location_kernel", location_kernel);
  put("prenet_hidden", prenet_hidden);
  put("prenet_out", prenet_out);
  put("decoder_lstm", decoder_lstm);
  put("n_mels", n_mels);
  put("postnet_channels", postnet_channels);
  put("postnet_layers", postnet_layers);
  put("postnet_kernel", postnet_kernel);
  put("encoder_dropout", encoder_dropout);
  put("prenet_dropout", prenet_dropout);
  put("max_decoder_steps", max_decoder_steps);
  put("stop_threshold", stop_threshold);
  put("stop_consecutive", stop_consecutive);
  put("seed", seed);
  for (int b = 0; b < 3; ++b) {
    const auto& blk = blocks[static_cast<std::size_t>(b)];
    kv.set(block_key(b, "channels"), std::to_string(blk.channels));
    kv.set(block_key(b, "kernel"), join3(blk.kernel));
    kv.set(block_key(b, "stride"), join3(blk.stride));
    kv.set(block_key(b, "padding"), join3(blk.padding));
    kv.set(block_key(b, "pool_window"), join3(blk.pool_window));
    kv.set(block_key(b, "pool_stride"), join3(blk.pool_stride));
  }
}

std::vector<std::string> ModelConfig::keys() {
  std::vector<std::string> out(std::begin(kScalarKeys), std::end(kScalarKeys));
  for (int b = 0; b < 3; ++b)
    for (const char* f : kBlockFields) out.push_back(block_key(b, f));
  return out;
}

std::string ModelConfig::to_text() const {
  KvConfig kv;
  write(kv);
  return kv.to_string();
}

ModelConfig ModelConfig::from_text(const std::string& text) {
  const KvConfig kv = KvConfig::parse(text, "model config");
  kv.require_known(keys());
  ModelConfig c;
  c.read(kv);
  c.validate();
  return c;
}

std::uint64_t ModelConfig::hash() const { return fnv1a64(to_text()); }

}  // namespace lipmel
