// src/app/gradcheck-suite.h

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

#ifndef LIPMEL_APP_GRADCHECK_SUITE_H_
#define LIPMEL_APP_GRADCHECK_SUITE_H_

#include <string>
#include <vector>

#include "model/config.h"

namespace lipmel {

struct GradCheckRow {
  std::string name;
  Index coordinates = 0;
  double max_rel_error = 0;
  std::string worst;  // parameter holding the largest error
  bool pass = false;
};

// One row per tensor primitive (matmul, conv3d, conv1d, maxpool3d,
// batchnorm-train, lstm_cell, activations, linear) plus a full-model row
// for `micro` with 3 input frames and 2 decoder steps, dropout off.
// `fault_op` names a backward rule to corrupt (empty for none).
std::vector<GradCheckRow> run_gradcheck_suite(const ModelConfig& micro, double tolerance = 1e-4,
                                              const std::string& fault_op = "");

std::string format_gradcheck_table(const std::vector<GradCheckRow>& rows, double tolerance);

}  // namespace lipmel

#endif  // LIPMEL_APP_GRADCHECK_SUITE_H_
