// src/base/error.h

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

#ifndef LIPMEL_BASE_ERROR_H_
#define LIPMEL_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace lipmel {

// Exception hierarchy; the C API maps each class onto a stable status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or layer specs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (manifest, container, archive, WAV).
class ParseError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered in a loss or gradient.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Free-running inference stopped at max_decoder_steps under a strict gate.
class MaxStepsError : public Error {
 public:
  using Error::Error;
};

// A self-verification (gradient check) failed.
class CheckError : public Error {
 public:
  using Error::Error;
};

}  // namespace lipmel

#endif  // LIPMEL_BASE_ERROR_H_
