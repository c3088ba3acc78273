// src/tensor/tensor.h

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

#ifndef LIPMEL_TENSOR_TENSOR_H_
#define LIPMEL_TENSOR_TENSOR_H_

#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "base/error.h"
#include "base/real.h"

namespace lipmel {

using Shape = std::vector<Index>;

std::string shape_str(const Shape& s);
Index shape_numel(const Shape& s);

struct TensorImpl;

// One recorded operation. The backward rule reads the output's gradient and
// accumulates into the gradients of `inputs`.
struct Node {
  const char* op = "";
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::function<void(TensorImpl& out)> backward;
};

struct TensorImpl {
  Shape shape;
  std::vector<Real> data;
  std::vector<Real> grad;  // empty until first accumulation
  bool requires_grad = false;
  std::shared_ptr<Node> node;  // null for leaves

  // Returns the gradient buffer, allocating zeros on first use.
  std::vector<Real>& grad_buffer() {
    if (grad.empty()) grad.assign(data.size(), Real(0));
    return grad;
  }
};

// Dense row-major array with define-by-run reverse-mode differentiation.
// Copies share storage; use clone() for a deep copy.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

  static Tensor zeros(const Shape& shape);
  static Tensor full(const Shape& shape, Real value);
  static Tensor from(const Shape& shape, std::vector<Real> values);
  static Tensor scalar(Real value);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  Index dim(int axis) const;
  int ndim() const { return static_cast<int>(impl_->shape.size()); }
  Index numel() const { return static_cast<Index>(impl_->data.size()); }

  std::span<const Real> data() const { return impl_->data; }
  // Raw write access, for parameter updates and initialisation only.
  std::span<Real> mutable_data() { return impl_->data; }
  Real item() const;
  Real at(std::initializer_list<Index> idx) const;

  bool requires_grad() const { return impl_->requires_grad; }
  Tensor& set_requires_grad(bool on);
  bool has_grad() const { return !impl_->grad.empty(); }
  std::span<const Real> grad() const { return impl_->grad; }
  std::span<Real> mutable_grad() { return impl_->grad_buffer(); }
  void zero_grad() { impl_->grad.clear(); }

  // Same storage contents, no history.
  Tensor detach() const;
  Tensor clone() const;

  // Reverse sweep from this scalar; see Graph.
  void backward() const;

  const std::shared_ptr<TensorImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<TensorImpl> impl_;
};

// Topologically ordered view of the operations that produced a tensor.
class Graph {
 public:
  explicit Graph(const Tensor& root);

  // Nodes' outputs in topological order (inputs precede consumers).
  const std::vector<TensorImpl*>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

  // Seeds d(root)/d(root) = 1 and visits every node once in reverse order.
  void backward();

 private:
  Tensor root_;
  std::vector<TensorImpl*> order_;
};

// Disables graph recording on the calling thread while alive.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

namespace detail {

// Creates an output tensor; records a node when any input requires grad.
Tensor make_result(Shape shape, std::vector<Real> data, const char* op,
                   std::vector<Tensor> inputs,
                   std::function<void(TensorImpl& out)> backward);

bool any_requires_grad(std::initializer_list<const Tensor*> ts);

// Test hook: when set, the named op's incoming gradient is scaled by 1.5
// before its backward rule runs, corrupting that rule.
void set_backward_fault(const std::string& op);
const std::string& backward_fault();

}  // namespace detail

}  // namespace lipmel

#endif  // LIPMEL_TENSOR_TENSOR_H_
