// src/tensor/kernels.h

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

#ifndef LIPMEL_TENSOR_KERNELS_H_
#define LIPMEL_TENSOR_KERNELS_H_

#include <Eigen/Core>

#include "base/real.h"

namespace lipmel::kernels {

// Dense row-major GEMM variants backed by Eigen; all accumulate into C.
// Eigen runs single-threaded here, so reduction order is fixed for a given
// build and shape.

using MatrixMap = Eigen::Map<
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatrixMap = Eigen::Map<
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// C[m x n] += A[m x k] * B[k x n]
inline void gemm_nn(Index m, Index n, Index k, const Real* A, const Real* B,
                    Real* C) {
  MatrixMap(C, m, n).noalias() += ConstMatrixMap(A, m, k) * ConstMatrixMap(B, k, n);
}

// C[m x n] += A[m x k] * B^T, B stored as [n x k]
inline void gemm_nt(Index m, Index n, Index k, const Real* A, const Real* B,
                    Real* C) {
  MatrixMap(C, m, n).noalias() +=
      ConstMatrixMap(A, m, k) * ConstMatrixMap(B, n, k).transpose();
}

// C[m x n] += A^T * B, A stored as [k x m], B as [k x n]
inline void gemm_tn(Index m, Index n, Index k, const Real* A, const Real* B,
                    Real* C) {
  MatrixMap(C, m, n).noalias() +=
      ConstMatrixMap(A, k, m).transpose() * ConstMatrixMap(B, k, n);
}

inline Real dot(const Real* x, const Real* y, Index n) {
  using Vec = Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, 1>>;
  return Vec(x, n).dot(Vec(y, n));
}

}  // namespace lipmel::kernels

#endif  // LIPMEL_TENSOR_KERNELS_H_
