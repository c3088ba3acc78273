// src/train/optimizer.cc

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

#include "train/optimizer.h"

#include <cmath>

#include "base/error.h"

namespace lipmel {

double gradient_norm(const std::vector<NamedTensor>& params) {
  double sq = 0;
  for (const auto& [name, t] : params)
    for (Real g : t.grad()) sq += static_cast<double>(g) * g;
  return std::sqrt(sq);
}

double clip_gradients(const std::vector<NamedTensor>& params, double threshold) {
  for (const auto& [name, t] : params)
    for (Real g : t.grad())
      if (!std::isfinite(g)) throw NumericError("non-finite gradient in parameter '" + name + "'");
  const double norm = gradient_norm(params);
  if (norm > threshold) {
    const Real s = static_cast<Real>(threshold / norm);
    for (const auto& [name, t] : params) {
      Tensor p = t;
      if (!p.has_grad()) continue;
      for (Real& g : p.mutable_grad()) g *= s;
    }
  }
  return norm;
}

void Adam::step(const std::vector<NamedTensor>& params, double lr) {
  if (names_.empty()) {
    for (const auto& [name, t] : params) {
      names_.push_back(name);
      m_.emplace_back(static_cast<std::size_t>(t.numel()), Real(0));
      v_.emplace_back(static_cast<std::size_t>(t.numel()), Real(0));
    }
  }
  if (names_.size() != params.size()) throw ShapeError("Adam: parameter list changed");
  ++t_;
  const double c1 = 1 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor p = params[i].second;
    const auto g = p.grad();
    auto w = p.mutable_data();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t k = 0; k < m.size(); ++k) {
      const double gk = g.empty() ? 0.0 : static_cast<double>(g[k]);
      m[k] = static_cast<Real>(beta1_ * m[k] + (1 - beta1_) * gk);
      v[k] = static_cast<Real>(beta2_ * v[k] + (1 - beta2_) * gk * gk);
      const double mh = m[k] / c1, vh = v[k] / c2;
      w[k] = static_cast<Real>(w[k] - lr * mh / (std::sqrt(vh) + eps_));
    }
  }
}

void Adam::save(Archive& ar) const {
  ar.put_i64("adam/t", t_);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const Index n = static_cast<Index>(m_[i].size());
    ar.put_tensor("adam/m/" + names_[i], Tensor::from({n}, m_[i]));
    ar.put_tensor("adam/v/" + names_[i], Tensor::from({n}, v_[i]));
  }
}

void Adam::load(const Archive& ar, const std::vector<NamedTensor>& params) {
  t_ = ar.get_i64("adam/t");
  names_.clear();
  m_.clear();
  v_.clear();
  if (t_ == 0) return;
  for (const auto& [name, t] : params) {
    const Tensor m = ar.get_tensor("adam/m/" + name), v = ar.get_tensor("adam/v/" + name);
    if (m.numel() != t.numel() || v.numel() != t.numel())
      throw ShapeError("checkpoint optimizer state for '" + name + "' has the wrong size");
    names_.push_back(name);
    m_.emplace_back(m.data().begin(), m.data().end());
    v_.emplace_back(v.data().begin(), v.data().end());
  }
}

}  // namespace lipmel
