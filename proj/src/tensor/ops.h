// src/tensor/ops.h

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

#ifndef LIPMEL_TENSOR_OPS_H_
#define LIPMEL_TENSOR_OPS_H_

#include <vector>

#include "base/rng.h"
#include "tensor/tensor.h"

namespace lipmel::ops {

// Elementwise arithmetic on equal shapes.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, Real s);

// a[..., n] + row[n], broadcast over all leading positions.
Tensor add_row(const Tensor& a, const Tensor& row);

Tensor matmul(const Tensor& a, const Tensor& b);

// x[m x in] * w[out x in]^T + b[out]; `b` may be undefined.
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b = Tensor());

enum class Activation { kRelu, kTanh, kSigmoid };
Tensor activation(const Tensor& x, Activation kind);
inline Tensor relu(const Tensor& x) { return activation(x, Activation::kRelu); }
inline Tensor tanh(const Tensor& x) { return activation(x, Activation::kTanh); }
inline Tensor sigmoid(const Tensor& x) {
  return activation(x, Activation::kSigmoid);
}

// Max-subtracted softmax along `axis`.
Tensor softmax(const Tensor& x, int axis);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
// mean((a - b)^2) over all entries.
Tensor mse(const Tensor& a, const Tensor& b);
// sum((a - b)^2).
Tensor squared_error_sum(const Tensor& a, const Tensor& b);

Tensor concat(const std::vector<Tensor>& xs, int axis);
Tensor slice(const Tensor& x, int axis, Index start, Index length);
Tensor reshape(const Tensor& x, const Shape& shape);
// 2-D transpose.
Tensor transpose(const Tensor& x);

// Inverted dropout; identity when !active or p == 0.
Tensor dropout(const Tensor& x, Real p, Rng& rng, bool active);

// [C x T x H x W] -> [T x (C*H*W)], channel-major within each time step.
Tensor channels_to_time(const Tensor& x);

}  // namespace lipmel::ops

#endif  // LIPMEL_TENSOR_OPS_H_
