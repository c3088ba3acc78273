// src/dsp/fft.h

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

#ifndef LIPMEL_DSP_FFT_H_
#define LIPMEL_DSP_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace lipmel::dsp {

using Complex = std::complex<double>;

// One-sided real FFT of length n (input size n, output n/2 + 1 bins).
// Backed by FFTW; plans are cached per size behind a mutex.
std::vector<Complex> rfft(std::span<const double> input);

// Inverse of rfft, including the 1/n scaling: irfft(rfft(x)) == x.
std::vector<double> irfft(std::span<const Complex> spectrum, std::size_t n);

}  // namespace lipmel::dsp

#endif  // LIPMEL_DSP_FFT_H_
