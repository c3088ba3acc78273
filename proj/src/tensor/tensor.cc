// src/tensor/tensor.cc

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

#include "tensor/tensor.h"

#include <sstream>
#include <unordered_set>

namespace lipmel {

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << 'x';
    os << s[i];
  }
  os << ']';
  return os.str();
}

Index shape_numel(const Shape& s) {
  Index n = 1;
  for (Index d : s) {
    if (d < 0) throw ShapeError("negative dimension in shape " + shape_str(s));
    n *= d;
  }
  return n;
}

Tensor Tensor::zeros(const Shape& shape) { return full(shape, Real(0)); }

Tensor Tensor::full(const Shape& shape, Real value) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = shape;
  impl->data.assign(static_cast<std::size_t>(shape_numel(shape)), value);
  return Tensor(std::move(impl));
}

Tensor Tensor::from(const Shape& shape, std::vector<Real> values) {
  if (shape_numel(shape) != static_cast<Index>(values.size()))
    throw ShapeError("shape " + shape_str(shape) + " does not hold " +
                     std::to_string(values.size()) + " values");
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = shape;
  impl->data = std::move(values);
  return Tensor(std::move(impl));
}

Tensor Tensor::scalar(Real value) { return from({1}, {value}); }

Index Tensor::dim(int axis) const {
  const int n = ndim();
  if (axis < 0) axis += n;
  if (axis < 0 || axis >= n)
    throw ShapeError("axis " + std::to_string(axis) + " out of range for " +
                     shape_str(shape()));
  return impl_->shape[axis];
}

Real Tensor::item() const {
  if (numel() != 1)
    throw ShapeError("item() on tensor of shape " + shape_str(shape()));
  return impl_->data[0];
}

Real Tensor::at(std::initializer_list<Index> idx) const {
  if (static_cast<int>(idx.size()) != ndim())
    throw ShapeError("index rank mismatch for " + shape_str(shape()));
  Index flat = 0;
  int a = 0;
  for (Index i : idx) {
    if (i < 0 || i >= impl_->shape[a])
      throw ShapeError("index out of range for " + shape_str(shape()));
    flat = flat * impl_->shape[a] + i;
    ++a;
  }
  return impl_->data[flat];
}

Tensor& Tensor::set_requires_grad(bool on) {
  if (impl_->node && !on)
    throw Error("cannot clear requires_grad on a non-leaf tensor");
  impl_->requires_grad = on;
  return *this;
}

Tensor Tensor::detach() const {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  return Tensor(std::move(impl));
}

Tensor Tensor::clone() const { return detach(); }

void Tensor::backward() const {
  Graph g(*this);
  g.backward();
}

Graph::Graph(const Tensor& root) : root_(root) {
  // Iterative post-order DFS; a node is emitted after all of its inputs.
  std::unordered_set<const TensorImpl*> visited;
  std::vector<std::pair<TensorImpl*, std::size_t>> stack;
  TensorImpl* r = root.impl().get();
  if (!r->node) return;
  stack.emplace_back(r, 0);
  visited.insert(r);
  while (!stack.empty()) {
    auto& [t, next] = stack.back();
    const auto& inputs = t->node->inputs;
    if (next < inputs.size()) {
      TensorImpl* in = inputs[next++].get();
      if (in->node && in->requires_grad && !visited.count(in)) {
        visited.insert(in);
        stack.emplace_back(in, 0);
      }
    } else {
      order_.push_back(t);
      stack.pop_back();
    }
  }
}

void Graph::backward() {
  TensorImpl& r = *root_.impl();
  if (r.data.size() != 1)
    throw ShapeError("backward() requires a scalar, got shape " +
                     shape_str(r.shape));
  if (!r.requires_grad) return;
  r.grad_buffer()[0] += Real(1);
  const std::string& fault = detail::backward_fault();
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    TensorImpl& out = **it;
    if (out.grad.empty()) continue;
    if (!fault.empty() && fault == out.node->op)
      for (Real& g : out.grad) g *= Real(1.5);
    out.node->backward(out);
  }
}

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool grad_enabled() { return g_grad_enabled; }

namespace detail {

namespace {
std::string& fault_slot() {
  static std::string op;
  return op;
}
}  // namespace

void set_backward_fault(const std::string& op) { fault_slot() = op; }
const std::string& backward_fault() { return fault_slot(); }

bool any_requires_grad(std::initializer_list<const Tensor*> ts) {
  for (const Tensor* t : ts)
    if (t && t->defined() && t->requires_grad()) return true;
  return false;
}

Tensor make_result(Shape shape, std::vector<Real> data, const char* op,
                   std::vector<Tensor> inputs,
                   std::function<void(TensorImpl& out)> backward) {
  auto impl = std::make_shared<TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  bool needs = false;
  if (grad_enabled())
    for (const Tensor& t : inputs)
    if (t.defined() && t.requires_grad()) needs = true;
  if (needs) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->inputs.reserve(inputs.size());
    for (Tensor& t : inputs)
      if (t.defined()) node->inputs.push_back(t.impl());
    node->backward = std::move(backward);
    impl->node = std::move(node);
    impl->requires_grad = true;
  }
  return Tensor(std::move(impl));
}

}  // namespace detail

}  // namespace lipmel
