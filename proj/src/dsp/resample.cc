// src/dsp/resample.cc

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

#include "dsp/resample.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lipmel::dsp {

std::vector<double> resample_poly(const std::vector<double>& x, int up,
                                  int down) {
  if (up < 1 || down < 1) throw ConfigError("resample factors must be >= 1");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return x;

  // Filter designed at the upsampled rate.
  const int max_rate = std::max(up, down);
  const long half = 10L * max_rate;
  const long taps = 2 * half + 1;
  const double cutoff = 1.0 / max_rate;  // fraction of the upsampled Nyquist
  const double beta = 5.0;
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  std::vector<double> h(static_cast<std::size_t>(taps));
  for (long i = 0; i < taps; ++i) {
    const double n = static_cast<double>(i - half);
    const double arg = cutoff * n;
    const double sinc = n == 0 ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
    const double r = n / static_cast<double>(half);
    const double kaiser =
        std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
        i0_beta;
    // Gain `up` restores amplitude lost to zero insertion.
    h[static_cast<std::size_t>(i)] = up * cutoff * sinc * kaiser;
  }

  const long n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  for (long m = 0; m < n_out; ++m) {
    // Output sample m sits at upsampled index m*down; the filter is centred
    // on it (zero group delay).
    const long centre = m * down;
    double acc = 0;
    // Upsampled positions j with j % up == 0 carry x[j / up].
    long j_first = centre - half;
    long rem = ((j_first % up) + up) % up;
    if (rem) j_first += up - rem;
    for (long j = j_first; j <= centre + half; j += up) {
      const long src = j / up;
      if (src < 0 || src >= n_in) continue;
      acc += x[static_cast<std::size_t>(src)] *
             h[static_cast<std::size_t>(j - centre + half)];
    }
    y[static_cast<std::size_t>(m)] = acc;
  }
  return y;
}

AudioSignal resample(const AudioSignal& audio, int rate) {
  if (rate <= 0) throw ConfigError("target sample rate must be positive");
  AudioSignal out;
  out.sample_rate = rate;
  out.samples = resample_poly(audio.samples, rate, audio.sample_rate);
  return out;
}

}  // namespace lipmel::dsp
