// src/tensor/gradcheck.h

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

#ifndef LIPMEL_TENSOR_GRADCHECK_H_
#define LIPMEL_TENSOR_GRADCHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "tensor/tensor.h"

namespace lipmel {

struct GradCheckResult {
  Real max_rel_error = 0;
  std::string worst_param;  // empty for the single-tensor overload
  Index worst_index = -1;
  Real analytic = 0;
  Real numeric = 0;
  Index coordinates = 0;
};

inline constexpr Real kGradCheckFloor = Real(1e-8);

// |a - n| / max(|a|, |n|, floor). The floor keeps coordinates whose true
// gradient is below the finite-difference noise from dominating.
Real relative_error(Real analytic, Real numeric, Real floor = kGradCheckFloor);

// Compares the reverse-mode gradient of `loss()` with respect to every
// coordinate of `params` against central differences
// (f(x + eps) - f(x - eps)) / (2 eps). `loss` must rebuild its graph on every
// call and be deterministic.
GradCheckResult gradient_check(
    const std::function<Tensor()>& loss,
    const std::vector<std::pair<std::string, Tensor>>& params, Real eps,
    Real floor = kGradCheckFloor);

GradCheckResult gradient_check(const std::function<Tensor(const Tensor&)>& f,
                               Tensor x, Real eps, Real floor = kGradCheckFloor);

}  // namespace lipmel

#endif  // LIPMEL_TENSOR_GRADCHECK_H_
