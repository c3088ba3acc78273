// src/train/optimizer.h

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

#ifndef LIPMEL_TRAIN_OPTIMIZER_H_
#define LIPMEL_TRAIN_OPTIMIZER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "model/lipmel-model.h"
#include "tensor/archive.h"

namespace lipmel {

// Global L2 norm of all gradients; parameters without a gradient count as
// zero.
double gradient_norm(const std::vector<NamedTensor>& params);

// Scales every gradient by threshold / norm when the global norm exceeds
// the threshold. Returns the norm before clipping. Throws NumericError
// naming the first parameter holding a non-finite gradient.
double clip_gradients(const std::vector<NamedTensor>& params, double threshold);

class Adam {
 public:
  Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // One bias-corrected update with learning rate `lr`.
  void step(const std::vector<NamedTensor>& params, double lr);

  std::int64_t steps() const { return t_; }

  void save(Archive& ar) const;
  // Restores moments for the given parameters; throws ShapeError on
  // mismatch.
  void load(const Archive& ar, const std::vector<NamedTensor>& params);

 private:
  double beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<Real>> m_, v_;
};

}  // namespace lipmel

#endif  // LIPMEL_TRAIN_OPTIMIZER_H_
