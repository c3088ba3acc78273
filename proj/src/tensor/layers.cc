// src/tensor/layers.cc

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

#include "tensor/layers.h"

#include <cmath>

#include "tensor/ops.h"

namespace lipmel {

BatchNormStats BatchNormStats::identity(Index channels) {
  return {Tensor::zeros({channels}), Tensor::full({channels}, Real(1))};
}

LstmState LstmState::zeros(Index hidden) {
  return {Tensor::zeros({1, hidden}), Tensor::zeros({1, hidden})};
}

namespace ops {

Tensor batchnorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 BatchNormStats& stats, bool train, Real momentum, Real eps) {
  if (x.ndim() < 1) throw ShapeError("batchnorm on a scalar");
  const Index C = x.dim(0);
  const Index N = C ? x.numel() / C : 0;
  if (gamma.numel() != C || beta.numel() != C || stats.mean.numel() != C ||
      stats.var.numel() != C)
    throw ShapeError("batchnorm: parameter size does not match " +
                     std::to_string(C) + " channels");
  if (train && N < 2)
    throw ShapeError(
        "batchnorm: train mode needs at least 2 values per channel, got " +
        std::to_string(N));
  auto xd = x.data();
  auto gd = gamma.data();
  auto bd = beta.data();
  std::vector<Real> xhat(xd.size());
  std::vector<Real> inv_std(static_cast<std::size_t>(C));
  std::vector<Real> out(xd.size());
  for (Index c = 0; c < C; ++c) {
    const Real* xc = xd.data() + c * N;
    Real mu, var;
    if (train) {
      Real s = 0;
      for (Index i = 0; i < N; ++i) s += xc[i];
      mu = s / N;
      Real ss = 0;
      for (Index i = 0; i < N; ++i) ss += (xc[i] - mu) * (xc[i] - mu);
      var = ss / N;
      auto rm = stats.mean.mutable_data();
      auto rv = stats.var.mutable_data();
      rm[c] = (1 - momentum) * rm[c] + momentum * mu;
      rv[c] = (1 - momentum) * rv[c] + momentum * (ss / (N - 1));
    } else {
      mu = stats.mean.data()[c];
      var = stats.var.data()[c];
    }
    const Real inv = Real(1) / std::sqrt(var + eps);
    inv_std[c] = inv;
    for (Index i = 0; i < N; ++i) {
      const Real h = (xc[i] - mu) * inv;
      xhat[c * N + i] = h;
      out[c * N + i] = gd[c] * h + bd[c];
    }
  }
  auto xi = x.impl(), gi = gamma.impl(), bi = beta.impl();
  return detail::make_result(
      x.shape(), std::move(out), train ? "batchnorm_train" : "batchnorm_eval",
      {x, gamma, beta},
      [xi, gi, bi, C, N, train, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](TensorImpl& o) {
        for (Index c = 0; c < C; ++c) {
          const Real* dy = o.grad.data() + c * N;
          const Real* h = xhat.data() + c * N;
          Real sum_dy = 0, sum_dy_h = 0;
          for (Index i = 0; i < N; ++i) {
            sum_dy += dy[i];
            sum_dy_h += dy[i] * h[i];
          }
          if (gi->requires_grad) gi->grad_buffer()[c] += sum_dy_h;
          if (bi->requires_grad) bi->grad_buffer()[c] += sum_dy;
          if (!xi->requires_grad) continue;
          Real* dx = xi->grad_buffer().data() + c * N;
          const Real gscale = gi->data[c] * inv_std[c];
          if (train) {
            const Real mean_dy = sum_dy / N;
            const Real mean_dy_h = sum_dy_h / N;
            for (Index i = 0; i < N; ++i)
              dx[i] += gscale * (dy[i] - mean_dy - h[i] * mean_dy_h);
          } else {
            for (Index i = 0; i < N; ++i) dx[i] += gscale * dy[i];
          }
        }
      });
}

LstmState lstm_cell_projected(const Tensor& gates_x, const LstmState& prev,
                              const LstmWeights& w) {
  const Index H = w.hidden();
  if (gates_x.numel() != 4 * H || prev.h.numel() != H || prev.c.numel() != H)
    throw ShapeError("lstm_cell: gates " + shape_str(gates_x.shape()) +
                     " / state " + shape_str(prev.h.shape()) +
                     " inconsistent with hidden size " + std::to_string(H));
  const Tensor gates = add(reshape(gates_x, {1, 4 * H}),
                           linear(reshape(prev.h, {1, H}), w.w_hh));
  const Tensor i = sigmoid(slice(gates, 1, 0, H));
  const Tensor f = sigmoid(slice(gates, 1, H, H));
  const Tensor g = tanh(slice(gates, 1, 2 * H, H));
  const Tensor o = sigmoid(slice(gates, 1, 3 * H, H));
  const Tensor c = add(mul(f, reshape(prev.c, {1, H})), mul(i, g));
  const Tensor h = mul(o, tanh(c));
  return {h, c};
}

LstmState lstm_cell(const Tensor& x, const LstmState& prev,
                    const LstmWeights& w) {
  if (w.w_ih.dim(1) != x.numel())
    throw ShapeError("lstm_cell: input " + shape_str(x.shape()) +
                     " vs w_ih " + shape_str(w.w_ih.shape()));
  return lstm_cell_projected(linear(reshape(x, {1, x.numel()}), w.w_ih, w.bias),
                             prev, w);
}

}  // namespace ops

Real xavier_bound(const Shape& shape, Real gain) {
  if (shape.size() < 2)
    throw ShapeError("xavier init needs rank >= 2, got " + shape_str(shape));
  Index receptive = 1;
  for (std::size_t i = 2; i < shape.size(); ++i) receptive *= shape[i];
  const Index fan_out = shape[0] * receptive;
  const Index fan_in = shape[1] * receptive;
  return gain * std::sqrt(Real(6) / static_cast<Real>(fan_in + fan_out));
}

Tensor xavier_uniform(const Shape& shape, Real gain, Rng& rng) {
  const Real b = xavier_bound(shape, gain);
  std::vector<Real> v(static_cast<std::size_t>(shape_numel(shape)));
  for (Real& x : v) x = static_cast<Real>(rng.uniform(-b, b));
  return Tensor::from(shape, std::move(v));
}

}  // namespace lipmel
