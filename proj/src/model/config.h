// src/model/config.h

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

#ifndef LIPMEL_MODEL_CONFIG_H_
#define LIPMEL_MODEL_CONFIG_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "tensor/conv.h"

namespace lipmel {

// Conv3D -> BatchNorm -> ReLU -> MaxPool3D -> Dropout.
struct EncoderBlockConfig {
  Index channels = 32;
  std::array<Index, 3> kernel{5, 3, 3};
  std::array<Index, 3> stride{1, 2, 2};
  std::array<Index, 3> padding{2, 0, 0};
  std::array<Index, 3> pool_window{1, 2, 2};
  std::array<Index, 3> pool_stride{1, 2, 2};
};

struct ModelConfig {
  Index input_channels = 1;
  Index frame_size = 112;
  std::array<EncoderBlockConfig, 3> blocks{};
  Index encoder_lstm = 128;  // per direction
  Index encoder_layers = 2;
  Index attention_lstm = 1024;
  Index attention_dim = 128;  // query / memory / location projections
  Index location_channels = 32;
  Index location_kernel = 31;
  Index prenet_hidden = 512;
  Index prenet_out = 256;
  Index decoder_lstm = 1024;
  Index n_mels = 80;
  Index postnet_channels = 512;
  Index postnet_layers = 5;
  Index postnet_kernel = 5;
  double encoder_dropout = 0.1;
  double prenet_dropout = 0.5;
  Index max_decoder_steps = 1000;
  double stop_threshold = 0.5;
  Index stop_consecutive = 3;
  std::uint64_t seed = 1;

  ModelConfig();

  // Full-size network.
  static ModelConfig standard();
  // Scaled-down network for fast learning runs on 112x112 input.
  static ModelConfig reduced();
  // 8x8 input, tiny widths, dropout off; for finite-difference checks.
  static ModelConfig micro();

  Index encoder_dim() const { return 2 * encoder_lstm; }
  // Spatial side length after each conv and pool, starting from frame_size.
  std::vector<Index> spatial_trace() const;
  // Per-timestep feature size entering the BiLSTM.
  Index flatten_dim() const;
  ConvSpec conv_spec(int block) const;
  PoolSpec pool_spec(int block) const;

  // Throws ConfigError on non-positive sizes, bad probabilities, or an
  // encoder that changes the time length.
  void validate() const;

  // "model.*" keys. Missing keys keep their current values.
  void read(const KvConfig& kv);
  void write(KvConfig& kv) const;
  static std::vector<std::string> keys();
  std::string to_text() const;
  static ModelConfig from_text(const std::string& text);
  std::uint64_t hash() const;
};

}  // namespace lipmel

#endif  // LIPMEL_MODEL_CONFIG_H_
