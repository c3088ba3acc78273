// src/tensor/conv.h

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

#ifndef LIPMEL_TENSOR_CONV_H_
#define LIPMEL_TENSOR_CONV_H_

#include <array>

#include "tensor/tensor.h"

namespace lipmel {

// floor((in + 2*pad - kernel) / stride) + 1; throws ConfigError if < 1.
Index conv_output_length(Index in, Index kernel, Index stride, Index pad);

// Per-axis (time, height, width) geometry of a 3-D convolution.
struct ConvSpec {
  std::array<Index, 3> kernel{1, 1, 1};
  std::array<Index, 3> stride{1, 1, 1};
  std::array<Index, 3> padding{0, 0, 0};
  Index in_channels = 1;
  Index out_channels = 1;

  // Output (T', H', W') for an input of extent (T, H, W).
  std::array<Index, 3> output_extent(const std::array<Index, 3>& in) const;
};

struct PoolSpec {
  std::array<Index, 3> window{1, 1, 1};
  std::array<Index, 3> stride{1, 1, 1};

  std::array<Index, 3> output_extent(const std::array<Index, 3>& in) const;
};

namespace ops {

// Cross-correlation with zero padding.
// input [Cin x T x H x W], weight [Cout x Cin x kT x kH x kW], bias [Cout].
Tensor conv3d(const Tensor& input, const ConvSpec& spec, const Tensor& weight,
              const Tensor& bias);

// input [Cin x L], weight [Cout x Cin x K], bias [Cout] (may be undefined).
Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              Index stride, Index padding);

// Per-window max over [C x T x H x W]; gradient goes to the first maximal
// element (lowest flat index) of each window.
Tensor maxpool3d(const Tensor& input, const PoolSpec& spec);

}  // namespace ops

}  // namespace lipmel

#endif  // LIPMEL_TENSOR_CONV_H_
