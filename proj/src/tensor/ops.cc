// src/tensor/ops.cc

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

#include "tensor/ops.h"

#include <algorithm>
#include <cmath>

#include "tensor/kernels.h"

namespace lipmel::ops {

using detail::make_result;
using Impl = std::shared_ptr<TensorImpl>;

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

int normalize_axis(int axis, int ndim, const char* op) {
  if (axis < 0) axis += ndim;
  if (axis < 0 || axis >= ndim)
    throw ShapeError(std::string(op) + ": axis out of range");
  return axis;
}

// outer = product of dims before axis, inner = product after.
void split_at_axis(const Shape& s, int axis, Index& outer, Index& len,
                   Index& inner) {
  outer = 1;
  inner = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  len = s[axis];
  for (std::size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<Real> out(a.data().begin(), a.data().end());
  auto bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bd[i];
  Impl ai = a.impl(), bi = b.impl();
  return make_result(a.shape(), std::move(out), "add", {a, b},
                     [ai, bi](TensorImpl& o) {
                       for (Impl t : {ai, bi}) {
                         if (!t->requires_grad) continue;
                         auto& g = t->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] += o.grad[i];
                       }
                     });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  std::vector<Real> out(a.data().begin(), a.data().end());
  auto bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bd[i];
  Impl ai = a.impl(), bi = b.impl();
  return make_result(a.shape(), std::move(out), "sub", {a, b},
                     [ai, bi](TensorImpl& o) {
                       if (ai->requires_grad) {
                         auto& g = ai->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] += o.grad[i];
                       }
                       if (bi->requires_grad) {
                         auto& g = bi->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] -= o.grad[i];
                       }
                     });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  auto ad = a.data();
  auto bd = b.data();
  std::vector<Real> out(ad.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] * bd[i];
  Impl ai = a.impl(), bi = b.impl();
  return make_result(a.shape(), std::move(out), "mul", {a, b},
                     [ai, bi](TensorImpl& o) {
                       if (ai->requires_grad) {
                         auto& g = ai->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] += o.grad[i] * bi->data[i];
                       }
                       if (bi->requires_grad) {
                         auto& g = bi->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] += o.grad[i] * ai->data[i];
                       }
                     });
}

Tensor scale(const Tensor& a, Real s) {
  std::vector<Real> out(a.data().begin(), a.data().end());
  for (Real& v : out) v *= s;
  Impl ai = a.impl();
  return make_result(a.shape(), std::move(out), "scale", {a},
                     [ai, s](TensorImpl& o) {
                       auto& g = ai->grad_buffer();
                       for (std::size_t i = 0; i < g.size(); ++i)
                         g[i] += o.grad[i] * s;
                     });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  const Index n = row.numel();
  if (a.ndim() < 1 || a.dim(-1) != n)
    throw ShapeError("add_row: " + shape_str(a.shape()) + " vs row " +
                     shape_str(row.shape()));
  std::vector<Real> out(a.data().begin(), a.data().end());
  auto r = row.data();
  const Index rows = a.numel() / std::max<Index>(n, 1);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < n; ++j) out[i * n + j] += r[j];
  Impl ai = a.impl(), ri = row.impl();
  return make_result(a.shape(), std::move(out), "add_row", {a, row},
                     [ai, ri, rows, n](TensorImpl& o) {
                       if (ai->requires_grad) {
                         auto& g = ai->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] += o.grad[i];
                       }
                       if (ri->requires_grad) {
                         auto& g = ri->grad_buffer();
                         for (Index i = 0; i < rows; ++i)
                           for (Index j = 0; j < n; ++j)
                             g[j] += o.grad[i * n + j];
                       }
                     });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.ndim() != 2 || b.ndim() != 2 || a.dim(1) != b.dim(0))
    throw ShapeError("matmul: dimension mismatch " + shape_str(a.shape()) +
                     " x " + shape_str(b.shape()));
  const Index m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<Real> out(static_cast<std::size_t>(m * n), Real(0));
  kernels::gemm_nn(m, n, k, a.data().data(), b.data().data(), out.data());
  Impl ai = a.impl(), bi = b.impl();
  return make_result({m, n}, std::move(out), "matmul", {a, b},
                     [ai, bi, m, n, k](TensorImpl& o) {
                       if (ai->requires_grad)  // dA = G * B^T
                         kernels::gemm_nt(m, k, n, o.grad.data(),
                                          bi->data.data(),
                                          ai->grad_buffer().data());
                       if (bi->requires_grad)  // dB = A^T * G
                         kernels::gemm_tn(k, n, m, ai->data.data(),
                                          o.grad.data(),
                                          bi->grad_buffer().data());
                     });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (x.ndim() != 2 || w.ndim() != 2 || x.dim(1) != w.dim(1))
    throw ShapeError("linear: input " + shape_str(x.shape()) +
                     " does not match weight " + shape_str(w.shape()));
  const Index m = x.dim(0), in = x.dim(1), out_dim = w.dim(0);
  if (b.defined() && b.numel() != out_dim)
    throw ShapeError("linear: bias " + shape_str(b.shape()) +
                     " does not match weight " + shape_str(w.shape()));
  std::vector<Real> out(static_cast<std::size_t>(m * out_dim), Real(0));
  if (b.defined()) {
    auto bd = b.data();
    for (Index i = 0; i < m; ++i)
      std::copy(bd.begin(), bd.end(), out.begin() + i * out_dim);
  }
  kernels::gemm_nt(m, out_dim, in, x.data().data(), w.data().data(),
                   out.data());
  Impl xi = x.impl(), wi = w.impl();
  Impl bi = b.defined() ? b.impl() : nullptr;
  return make_result(
      {m, out_dim}, std::move(out), "linear", {x, w, b},
      [xi, wi, bi, m, in, out_dim](TensorImpl& o) {
        if (xi->requires_grad)  // dx = G * W
          kernels::gemm_nn(m, in, out_dim, o.grad.data(), wi->data.data(),
                           xi->grad_buffer().data());
        if (wi->requires_grad)  // dW = G^T * x
          kernels::gemm_tn(out_dim, in, m, o.grad.data(), xi->data.data(),
                           wi->grad_buffer().data());
        if (bi && bi->requires_grad) {
          auto& g = bi->grad_buffer();
          for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < out_dim; ++j) g[j] += o.grad[i * out_dim + j];
        }
      });
}

Tensor activation(const Tensor& x, Activation kind) {
  auto xd = x.data();
  std::vector<Real> out(xd.size());
  const char* name = "relu";
  switch (kind) {
    case Activation::kRelu:
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = xd[i] > Real(0) ? xd[i] : Real(0);
      break;
    case Activation::kTanh:
      name = "tanh";
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(xd[i]);
      break;
    case Activation::kSigmoid:
      name = "sigmoid";
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = Real(1) / (Real(1) + std::exp(-xd[i]));
      break;
  }
  Impl xi = x.impl();
  return make_result(
      x.shape(), std::move(out), name, {x}, [xi, kind](TensorImpl& o) {
        auto& g = xi->grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Real y = o.data[i];
          Real d;
          switch (kind) {
            case Activation::kRelu: d = xi->data[i] > Real(0) ? 1 : 0; break;
            case Activation::kTanh: d = Real(1) - y * y; break;
            default: d = y * (Real(1) - y); break;
          }
          g[i] += o.grad[i] * d;
        }
      });
}

Tensor softmax(const Tensor& x, int axis) {
  axis = normalize_axis(axis, x.ndim(), "softmax");
  Index outer, len, inner;
  split_at_axis(x.shape(), axis, outer, len, inner);
  auto xd = x.data();
  std::vector<Real> out(xd.size());
  for (Index o = 0; o < outer; ++o) {
    for (Index in = 0; in < inner; ++in) {
      const Index base = o * len * inner + in;
      Real mx = xd[base];
      for (Index j = 1; j < len; ++j) mx = std::max(mx, xd[base + j * inner]);
      Real z = 0;
      for (Index j = 0; j < len; ++j) {
        const Real e = std::exp(xd[base + j * inner] - mx);
        out[base + j * inner] = e;
        z += e;
      }
      for (Index j = 0; j < len; ++j) out[base + j * inner] /= z;
    }
  }
  Impl xi = x.impl();
  return make_result(x.shape(), std::move(out), "softmax", {x},
                     [xi, outer, len, inner](TensorImpl& o) {
                       auto& g = xi->grad_buffer();
                       for (Index a = 0; a < outer; ++a) {
                         for (Index in = 0; in < inner; ++in) {
                           const Index base = a * len * inner + in;
                           Real dot = 0;
                           for (Index j = 0; j < len; ++j)
                             dot += o.grad[base + j * inner] *
                                    o.data[base + j * inner];
                           for (Index j = 0; j < len; ++j) {
                             const Index p = base + j * inner;
                             g[p] += o.data[p] * (o.grad[p] - dot);
                           }
                         }
                       }
                     });
}

Tensor sum(const Tensor& x) {
  Real s = 0;
  for (Real v : x.data()) s += v;
  Impl xi = x.impl();
  return make_result({1}, {s}, "sum", {x}, [xi](TensorImpl& o) {
    auto& g = xi->grad_buffer();
    for (Real& v : g) v += o.grad[0];
  });
}

Tensor mean(const Tensor& x) {
  if (x.numel() == 0) throw ShapeError("mean of empty tensor");
  return scale(sum(x), Real(1) / static_cast<Real>(x.numel()));
}

Tensor squared_error_sum(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "squared_error_sum");
  auto ad = a.data();
  auto bd = b.data();
  Real s = 0;
  for (std::size_t i = 0; i < ad.size(); ++i) {
    const Real d = ad[i] - bd[i];
    s += d * d;
  }
  Impl ai = a.impl(), bi = b.impl();
  return make_result({1}, {s}, "squared_error", {a, b},
                     [ai, bi](TensorImpl& o) {
                       const Real g0 = o.grad[0];
                       if (ai->requires_grad) {
                         auto& g = ai->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] += 2 * g0 * (ai->data[i] - bi->data[i]);
                       }
                       if (bi->requires_grad) {
                         auto& g = bi->grad_buffer();
                         for (std::size_t i = 0; i < g.size(); ++i)
                           g[i] -= 2 * g0 * (ai->data[i] - bi->data[i]);
                       }
                     });
}

Tensor mse(const Tensor& a, const Tensor& b) {
  if (a.numel() == 0) throw ShapeError("mse of empty tensors");
  return scale(squared_error_sum(a, b), Real(1) / static_cast<Real>(a.numel()));
}

Tensor concat(const std::vector<Tensor>& xs, int axis) {
  if (xs.empty()) throw ShapeError("concat of nothing");
  const int nd = xs[0].ndim();
  axis = normalize_axis(axis, nd, "concat");
  Shape shape = xs[0].shape();
  shape[axis] = 0;
  for (const Tensor& t : xs) {
    if (t.ndim() != nd) throw ShapeError("concat: rank mismatch");
    for (int d = 0; d < nd; ++d)
      if (d != axis && t.shape()[d] != xs[0].shape()[d])
        throw ShapeError("concat: " + shape_str(t.shape()) + " vs " +
                         shape_str(xs[0].shape()));
    shape[axis] += t.shape()[axis];
  }
  Index outer, total, inner;
  split_at_axis(shape, axis, outer, total, inner);
  std::vector<Real> out(static_cast<std::size_t>(shape_numel(shape)));
  std::vector<Index> offsets;
  Index off = 0;
  for (const Tensor& t : xs) {
    offsets.push_back(off);
    const Index len = t.shape()[axis];
    auto td = t.data();
    for (Index o = 0; o < outer; ++o)
      std::copy(td.begin() + o * len * inner, td.begin() + (o + 1) * len * inner,
                out.begin() + (o * total + off) * inner);
    off += len;
  }
  std::vector<Impl> impls;
  for (const Tensor& t : xs) impls.push_back(t.impl());
  return make_result(
      shape, std::move(out), "concat", xs,
      [impls, offsets, outer, total, inner, axis](TensorImpl& o) {
        for (std::size_t k = 0; k < impls.size(); ++k) {
          if (!impls[k]->requires_grad) continue;
          const Index len = impls[k]->shape[axis];
          auto& g = impls[k]->grad_buffer();
          for (Index a = 0; a < outer; ++a) {
            const Real* src = o.grad.data() + (a * total + offsets[k]) * inner;
            Real* dst = g.data() + a * len * inner;
            for (Index i = 0; i < len * inner; ++i) dst[i] += src[i];
          }
        }
      });
}

Tensor slice(const Tensor& x, int axis, Index start, Index length) {
  axis = normalize_axis(axis, x.ndim(), "slice");
  if (start < 0 || length < 0 || start + length > x.shape()[axis])
    throw ShapeError("slice [" + std::to_string(start) + ", +" +
                     std::to_string(length) + ") out of range for " +
                     shape_str(x.shape()));
  Index outer, total, inner;
  split_at_axis(x.shape(), axis, outer, total, inner);
  Shape shape = x.shape();
  shape[axis] = length;
  std::vector<Real> out(static_cast<std::size_t>(outer * length * inner));
  auto xd = x.data();
  for (Index o = 0; o < outer; ++o)
    std::copy(xd.begin() + (o * total + start) * inner,
              xd.begin() + (o * total + start + length) * inner,
              out.begin() + o * length * inner);
  Impl xi = x.impl();
  return make_result(shape, std::move(out), "slice", {x},
                     [xi, outer, total, inner, start, length](TensorImpl& o) {
                       auto& g = xi->grad_buffer();
                       for (Index a = 0; a < outer; ++a) {
                         const Real* src = o.grad.data() + a * length * inner;
                         Real* dst = g.data() + (a * total + start) * inner;
                         for (Index i = 0; i < length * inner; ++i)
                           dst[i] += src[i];
                       }
                     });
}

Tensor reshape(const Tensor& x, const Shape& shape) {
  if (shape_numel(shape) != x.numel())
    throw ShapeError("reshape " + shape_str(x.shape()) + " -> " +
                     shape_str(shape));
  std::vector<Real> out(x.data().begin(), x.data().end());
  Impl xi = x.impl();
  return make_result(shape, std::move(out), "reshape", {x},
                     [xi](TensorImpl& o) {
                       auto& g = xi->grad_buffer();
                       for (std::size_t i = 0; i < g.size(); ++i)
                         g[i] += o.grad[i];
                     });
}

Tensor transpose(const Tensor& x) {
  if (x.ndim() != 2) throw ShapeError("transpose needs a 2-D tensor");
  const Index r = x.dim(0), c = x.dim(1);
  auto xd = x.data();
  std::vector<Real> out(xd.size());
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) out[j * r + i] = xd[i * c + j];
  Impl xi = x.impl();
  return make_result({c, r}, std::move(out), "transpose", {x},
                     [xi, r, c](TensorImpl& o) {
                       auto& g = xi->grad_buffer();
                       for (Index i = 0; i < r; ++i)
                         for (Index j = 0; j < c; ++j)
                           g[i * c + j] += o.grad[j * r + i];
                     });
}

Tensor dropout(const Tensor& x, Real p, Rng& rng, bool active) {
  if (!active || p <= Real(0)) return x;
  if (p >= Real(1)) throw ConfigError("dropout probability must be < 1");
  const Real keep_scale = Real(1) / (Real(1) - p);
  auto xd = x.data();
  std::vector<Real> mask(xd.size());
  std::vector<Real> out(xd.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    mask[i] = rng.uniform() < p ? Real(0) : keep_scale;
    out[i] = xd[i] * mask[i];
  }
  Impl xi = x.impl();
  return make_result(x.shape(), std::move(out), "dropout", {x},
                     [xi, mask = std::move(mask)](TensorImpl& o) {
                       auto& g = xi->grad_buffer();
                       for (std::size_t i = 0; i < g.size(); ++i)
                         g[i] += o.grad[i] * mask[i];
                     });
}

Tensor channels_to_time(const Tensor& x) {
  if (x.ndim() != 4) throw ShapeError("channels_to_time needs C x T x H x W");
  const Index c = x.dim(0), t = x.dim(1), hw = x.dim(2) * x.dim(3);
  auto xd = x.data();
  std::vector<Real> out(xd.size());
  for (Index ci = 0; ci < c; ++ci)
    for (Index ti = 0; ti < t; ++ti)
      std::copy(xd.begin() + (ci * t + ti) * hw,
                xd.begin() + (ci * t + ti + 1) * hw,
                out.begin() + (ti * c + ci) * hw);
  Impl xi = x.impl();
  return make_result({t, c * hw}, std::move(out), "channels_to_time", {x},
                     [xi, c, t, hw](TensorImpl& o) {
                       auto& g = xi->grad_buffer();
                       for (Index ci = 0; ci < c; ++ci)
                         for (Index ti = 0; ti < t; ++ti) {
                           const Real* src =
                               o.grad.data() + (ti * c + ci) * hw;
                           Real* dst = g.data() + (ci * t + ti) * hw;
                           for (Index i = 0; i < hw; ++i) dst[i] += src[i];
                         }
                     });
}

}  // namespace lipmel::ops
