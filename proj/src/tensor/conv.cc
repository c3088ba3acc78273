// src/tensor/conv.cc

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

#include "tensor/conv.h"

#include <algorithm>
#include <string>

#include "tensor/kernels.h"

namespace lipmel {

Index conv_output_length(Index in, Index kernel, Index stride, Index pad) {
  if (kernel < 1 || stride < 1 || pad < 0)
    throw ConfigError("invalid kernel/stride/padding " +
                      std::to_string(kernel) + "/" + std::to_string(stride) +
                      "/" + std::to_string(pad));
  const Index span = in + 2 * pad - kernel;
  if (span < 0)
    throw ConfigError("kernel " + std::to_string(kernel) +
                      " larger than padded input " +
                      std::to_string(in + 2 * pad));
  return span / stride + 1;
}

std::array<Index, 3> ConvSpec::output_extent(
    const std::array<Index, 3>& in) const {
  return {conv_output_length(in[0], kernel[0], stride[0], padding[0]),
          conv_output_length(in[1], kernel[1], stride[1], padding[1]),
          conv_output_length(in[2], kernel[2], stride[2], padding[2])};
}

std::array<Index, 3> PoolSpec::output_extent(
    const std::array<Index, 3>& in) const {
  return {conv_output_length(in[0], window[0], stride[0], 0),
          conv_output_length(in[1], window[1], stride[1], 0),
          conv_output_length(in[2], window[2], stride[2], 0)};
}

namespace {

struct ConvGeometry {
  Index cin, cout;
  std::array<Index, 3> in, out, k, s, p;
  Index rows() const { return cin * k[0] * k[1] * k[2]; }
  Index cols() const { return out[0] * out[1] * out[2]; }
  Index in_size() const { return in[0] * in[1] * in[2]; }
};

// cols[r x P] with r = (c, kt, kh, kw), P = (t', h', w').
void im2col(const ConvGeometry& g, const Real* x, Real* cols) {
  const Index P = g.cols();
  Index r = 0;
  for (Index c = 0; c < g.cin; ++c) {
    const Real* xc = x + c * g.in_size();
    for (Index kt = 0; kt < g.k[0]; ++kt)
      for (Index kh = 0; kh < g.k[1]; ++kh)
        for (Index kw = 0; kw < g.k[2]; ++kw, ++r) {
          Real* dst = cols + r * P;
          Index q = 0;
          for (Index ot = 0; ot < g.out[0]; ++ot) {
            const Index t = ot * g.s[0] - g.p[0] + kt;
            const bool t_ok = t >= 0 && t < g.in[0];
            for (Index oh = 0; oh < g.out[1]; ++oh) {
              const Index h = oh * g.s[1] - g.p[1] + kh;
              const bool th_ok = t_ok && h >= 0 && h < g.in[1];
              const Real* row = th_ok ? xc + (t * g.in[1] + h) * g.in[2] : nullptr;
              for (Index ow = 0; ow < g.out[2]; ++ow, ++q) {
                const Index w = ow * g.s[2] - g.p[2] + kw;
                dst[q] = (th_ok && w >= 0 && w < g.in[2]) ? row[w] : Real(0);
              }
            }
          }
        }
  }
}

void col2im(const ConvGeometry& g, const Real* cols, Real* dx) {
  const Index P = g.cols();
  Index r = 0;
  for (Index c = 0; c < g.cin; ++c) {
    Real* xc = dx + c * g.in_size();
    for (Index kt = 0; kt < g.k[0]; ++kt)
      for (Index kh = 0; kh < g.k[1]; ++kh)
        for (Index kw = 0; kw < g.k[2]; ++kw, ++r) {
          const Real* src = cols + r * P;
          Index q = 0;
          for (Index ot = 0; ot < g.out[0]; ++ot) {
            const Index t = ot * g.s[0] - g.p[0] + kt;
            const bool t_ok = t >= 0 && t < g.in[0];
            for (Index oh = 0; oh < g.out[1]; ++oh) {
              const Index h = oh * g.s[1] - g.p[1] + kh;
              const bool th_ok = t_ok && h >= 0 && h < g.in[1];
              Real* row = th_ok ? xc + (t * g.in[1] + h) * g.in[2] : nullptr;
              for (Index ow = 0; ow < g.out[2]; ++ow, ++q) {
                const Index w = ow * g.s[2] - g.p[2] + kw;
                if (th_ok && w >= 0 && w < g.in[2]) row[w] += src[q];
              }
            }
          }
        }
  }
}

Tensor conv_impl(const Tensor& input, const ConvGeometry& g,
                 const Tensor& weight, const Tensor& bias, Shape out_shape,
                 const char* name) {
  const Index K = g.rows(), P = g.cols();
  std::vector<Real> cols(static_cast<std::size_t>(K * P));
  im2col(g, input.data().data(), cols.data());
  std::vector<Real> out(static_cast<std::size_t>(g.cout * P), Real(0));
  if (bias.defined()) {
    auto bd = bias.data();
    for (Index o = 0; o < g.cout; ++o)
      std::fill(out.begin() + o * P, out.begin() + (o + 1) * P, bd[o]);
  }
  kernels::gemm_nn(g.cout, P, K, weight.data().data(), cols.data(),
                   out.data());
  auto xi = input.impl();
  auto wi = weight.impl();
  auto bi = bias.defined() ? bias.impl() : nullptr;
  return detail::make_result(
      std::move(out_shape), std::move(out), name, {input, weight, bias},
      [xi, wi, bi, g, cols = std::move(cols)](TensorImpl& o) {
        const Index K = g.rows(), P = g.cols();
        if (wi->requires_grad)
          kernels::gemm_nt(g.cout, K, P, o.grad.data(), cols.data(),
                           wi->grad_buffer().data());
        if (bi && bi->requires_grad) {
          auto& gb = bi->grad_buffer();
          for (Index c = 0; c < g.cout; ++c) {
            Real s = 0;
            for (Index q = 0; q < P; ++q) s += o.grad[c * P + q];
            gb[c] += s;
          }
        }
        if (xi->requires_grad) {
          std::vector<Real> dcols(static_cast<std::size_t>(K * P), Real(0));
          kernels::gemm_tn(K, P, g.cout, wi->data.data(), o.grad.data(),
                           dcols.data());
          col2im(g, dcols.data(), xi->grad_buffer().data());
        }
      });
}

}  // namespace

namespace ops {

Tensor conv3d(const Tensor& input, const ConvSpec& spec, const Tensor& weight,
              const Tensor& bias) {
  if (input.ndim() != 4)
    throw ShapeError("conv3d: input must be C x T x H x W, got " +
                     shape_str(input.shape()));
  if (input.dim(0) != spec.in_channels)
    throw ShapeError("conv3d: input has " + std::to_string(input.dim(0)) +
                     " channels, spec expects " +
                     std::to_string(spec.in_channels));
  const Shape wshape{spec.out_channels, spec.in_channels, spec.kernel[0],
                     spec.kernel[1], spec.kernel[2]};
  if (weight.shape() != wshape)
    throw ShapeError("conv3d: weight " + shape_str(weight.shape()) +
                     ", expected " + shape_str(wshape));
  if (bias.defined() && bias.numel() != spec.out_channels)
    throw ShapeError("conv3d: bias size mismatch");
  ConvGeometry g;
  g.cin = spec.in_channels;
  g.cout = spec.out_channels;
  g.in = {input.dim(1), input.dim(2), input.dim(3)};
  g.out = spec.output_extent(g.in);
  g.k = spec.kernel;
  g.s = spec.stride;
  g.p = spec.padding;
  return conv_impl(input, g, weight, bias,
                   {g.cout, g.out[0], g.out[1], g.out[2]}, "conv3d");
}

Tensor conv1d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              Index stride, Index padding) {
  if (input.ndim() != 2 || weight.ndim() != 3 ||
      weight.dim(1) != input.dim(0))
    throw ShapeError("conv1d: input " + shape_str(input.shape()) +
                     " vs weight " + shape_str(weight.shape()));
  if (bias.defined() && bias.numel() != weight.dim(0))
    throw ShapeError("conv1d: bias size mismatch");
  ConvGeometry g;
  g.cin = input.dim(0);
  g.cout = weight.dim(0);
  g.in = {1, 1, input.dim(1)};
  g.k = {1, 1, weight.dim(2)};
  g.s = {1, 1, stride};
  g.p = {0, 0, padding};
  g.out = {1, 1, conv_output_length(g.in[2], g.k[2], stride, padding)};
  return conv_impl(input, g, weight, bias, {g.cout, g.out[2]}, "conv1d");
}

Tensor maxpool3d(const Tensor& input, const PoolSpec& spec) {
  if (input.ndim() != 4)
    throw ShapeError("maxpool3d: input must be C x T x H x W, got " +
                     shape_str(input.shape()));
  const Index C = input.dim(0);
  const std::array<Index, 3> in{input.dim(1), input.dim(2), input.dim(3)};
  const auto out = spec.output_extent(in);
  const Index in_size = in[0] * in[1] * in[2];
  const Index out_size = out[0] * out[1] * out[2];
  auto xd = input.data();
  std::vector<Real> y(static_cast<std::size_t>(C * out_size));
  std::vector<Index> argmax(y.size());
  Index q = 0;
  for (Index c = 0; c < C; ++c) {
    const Index base = c * in_size;
    for (Index ot = 0; ot < out[0]; ++ot)
      for (Index oh = 0; oh < out[1]; ++oh)
        for (Index ow = 0; ow < out[2]; ++ow, ++q) {
          Index best = -1;
          Real best_v = 0;
          // Visiting in increasing flat index keeps the first maximum on ties.
          for (Index kt = 0; kt < spec.window[0]; ++kt)
            for (Index kh = 0; kh < spec.window[1]; ++kh)
              for (Index kw = 0; kw < spec.window[2]; ++kw) {
                const Index t = ot * spec.stride[0] + kt;
                const Index h = oh * spec.stride[1] + kh;
                const Index w = ow * spec.stride[2] + kw;
                const Index idx = base + (t * in[1] + h) * in[2] + w;
                if (best < 0 || xd[idx] > best_v ||
                    (xd[idx] == best_v && idx < best)) {
                  best = idx;
                  best_v = xd[idx];
                }
              }
          y[q] = best_v;
          argmax[q] = best;
        }
  }
  auto xi = input.impl();
  return detail::make_result(
      {C, out[0], out[1], out[2]}, std::move(y), "maxpool3d", {input},
      [xi, argmax = std::move(argmax)](TensorImpl& o) {
        auto& g = xi->grad_buffer();
        for (std::size_t i = 0; i < argmax.size(); ++i)
          g[argmax[i]] += o.grad[i];
      });
}

}  // namespace ops

}  // namespace lipmel
