// src/dsp/fft.cc

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

#include "dsp/fft.h"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "base/error.h"

namespace lipmel::dsp {

namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW's planner is not thread-safe; execution with the new-array interface
// on fftw_malloc'd buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const Plans& plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  Plans p;
  // FFTW_ESTIMATE picks the plan without timing runs, so it is reproducible.
  p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), out, in,
                                    FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  fftw_free(in);
  fftw_free(out);
  if (!p.forward || !p.backward) throw Error("FFTW planning failed");
  return cache.emplace(n, p).first->second;
}

struct RealBuf {
  explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) {}
  ~RealBuf() { fftw_free(p); }
  double* p;
};
struct ComplexBuf {
  explicit ComplexBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
  ~ComplexBuf() { fftw_free(p); }
  fftw_complex* p;
};

}  // namespace

std::vector<Complex> rfft(std::span<const double> input) {
  const std::size_t n = input.size();
  if (n == 0) return {};
  const Plans& plans = plans_for(n);
  RealBuf in(n);
  ComplexBuf out(n / 2 + 1);
  std::memcpy(in.p, input.data(), n * sizeof(double));
  fftw_execute_dft_r2c(plans.forward, in.p, out.p);
  std::vector<Complex> result(n / 2 + 1);
  for (std::size_t k = 0; k < result.size(); ++k)
    result[k] = Complex(out.p[k][0], out.p[k][1]);
  return result;
}

std::vector<double> irfft(std::span<const Complex> spectrum, std::size_t n) {
  if (spectrum.size() != n / 2 + 1)
    throw ShapeError("irfft: spectrum size does not match n");
  const Plans& plans = plans_for(n);
  ComplexBuf in(n / 2 + 1);
  RealBuf out(n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    in.p[k][0] = spectrum[k].real();
    in.p[k][1] = spectrum[k].imag();
  }
  fftw_execute_dft_c2r(plans.backward, in.p, out.p);
  std::vector<double> result(out.p, out.p + n);
  for (double& v : result) v /= static_cast<double>(n);
  return result;
}

}  // namespace lipmel::dsp
