// src/base/real.h

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

#ifndef LIPMEL_BASE_REAL_H_
#define LIPMEL_BASE_REAL_H_

#include <cstddef>
#include <cstdint>

namespace lipmel {

#ifdef LIPMEL_SINGLE_PRECISION
using Real = float;
#else
using Real = double;
#endif

using Index = std::ptrdiff_t;

inline constexpr bool kDoublePrecision = sizeof(Real) == 8;

}  // namespace lipmel

#endif  // LIPMEL_BASE_REAL_H_
