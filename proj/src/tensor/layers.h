// src/tensor/layers.h

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

#ifndef LIPMEL_TENSOR_LAYERS_H_
#define LIPMEL_TENSOR_LAYERS_H_

#include "base/rng.h"
#include "tensor/tensor.h"

namespace lipmel {

inline constexpr Real kBatchNormEps = Real(1e-5);
inline constexpr Real kBatchNormMomentum = Real(0.1);

// Running statistics of a batch-norm layer; not differentiated.
struct BatchNormStats {
  Tensor mean;  // [C]
  Tensor var;   // [C]
  static BatchNormStats identity(Index channels);
};

// LSTM parameters, gate order (input, forget, cell, output).
struct LstmWeights {
  Tensor w_ih;  // [4H x in]
  Tensor w_hh;  // [4H x H]
  Tensor bias;  // [4H]
  Index hidden() const { return w_hh.dim(1); }
};

struct LstmState {
  Tensor h;  // [1 x H]
  Tensor c;  // [1 x H]
  static LstmState zeros(Index hidden);
};

namespace ops {

// Normalizes over every axis but axis 0 (the channel axis).
// Train mode uses batch statistics and folds them into `stats` with
// momentum; eval mode uses `stats` as-is.
Tensor batchnorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 BatchNormStats& stats, bool train,
                 Real momentum = kBatchNormMomentum,
                 Real eps = kBatchNormEps);

LstmState lstm_cell(const Tensor& x, const LstmState& prev,
                    const LstmWeights& w);

// Same cell, with the input projection x * W_ih^T + b precomputed ([1 x 4H]).
LstmState lstm_cell_projected(const Tensor& gates_x, const LstmState& prev,
                              const LstmWeights& w);

}  // namespace ops

// Uniform in +-gain * sqrt(6 / (fan_in + fan_out)). Shapes are [out x in] or
// [out x in x k...]; a rank-1 shape has no fan and is rejected.
Tensor xavier_uniform(const Shape& shape, Real gain, Rng& rng);
Real xavier_bound(const Shape& shape, Real gain);

}  // namespace lipmel

#endif  // LIPMEL_TENSOR_LAYERS_H_
