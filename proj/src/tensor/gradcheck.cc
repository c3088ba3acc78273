// src/tensor/gradcheck.cc

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

#include "tensor/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace lipmel {

Real relative_error(Real analytic, Real numeric, Real floor) {
  const Real denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult gradient_check(
    const std::function<Tensor()>& loss,
    const std::vector<std::pair<std::string, Tensor>>& params, Real eps,
    Real floor) {
  std::vector<Tensor> leaves;
  for (const auto& [name, t] : params) {
    Tensor p = t;
    p.set_requires_grad(true);
    p.zero_grad();
    leaves.push_back(p);
  }
  loss().backward();

  GradCheckResult result;
  NoGradGuard no_grad;
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    Tensor& p = leaves[k];
    std::vector<Real> analytic(static_cast<std::size_t>(p.numel()), Real(0));
    if (p.has_grad()) std::copy(p.grad().begin(), p.grad().end(), analytic.begin());
    auto values = p.mutable_data();
    for (Index i = 0; i < p.numel(); ++i) {
      const Real saved = values[i];
      values[i] = saved + eps;
      const Real up = loss().item();
      values[i] = saved - eps;
      const Real down = loss().item();
      values[i] = saved;
      const Real numeric = (up - down) / (2 * eps);
      const Real err = relative_error(analytic[i], numeric, floor);
      ++result.coordinates;
      if (result.worst_index < 0 || err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_param = params[k].first;
        result.worst_index = i;
        result.analytic = analytic[i];
        result.numeric = numeric;
      }
    }
    p.zero_grad();
  }
  return result;
}

GradCheckResult gradient_check(const std::function<Tensor(const Tensor&)>& f,
                               Tensor x, Real eps, Real floor) {
  GradCheckResult r =
      gradient_check([&] { return f(x); }, {{std::string(), x}}, eps, floor);
  r.worst_param.clear();
  return r;
}

}  // namespace lipmel
