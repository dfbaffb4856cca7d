// core/src/waveform.cc

// Copyright 2026  binderev contributors

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

#include "binderev/waveform.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "binderev/fft.h"

namespace binderev {

void validate(const Waveform& w) {
  if (w.sample_rate_hz <= 0)
    throw std::invalid_argument("waveform: sample_rate_hz must be positive");
  for (double s : w.samples)
    if (!std::isfinite(s))
      throw std::invalid_argument("waveform: non-finite sample");
}

Waveform convolve(const Waveform& x, const std::vector<double>& taps) {
  validate(x);
  if (taps.empty()) throw std::invalid_argument("convolve: empty taps");
  if (x.samples.empty()) throw std::invalid_argument("convolve: empty source");

  const std::size_t out_len = x.samples.size() + taps.size() - 1;
  const std::size_t nfft = next_pow2(out_len);
  auto xf = rfft(x.samples, nfft);
  auto hf = rfft(taps, nfft);
  for (std::size_t i = 0; i < xf.size(); ++i) xf[i] *= hf[i];
  auto y = irfft(xf, nfft);
  y.resize(out_len);

  Waveform out;
  out.sample_rate_hz = x.sample_rate_hz;
  out.samples = std::move(y);
  return out;
}

Waveform normalize(const Waveform& w) {
  validate(w);
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) throw std::invalid_argument("normalize: silent signal");
  Waveform out = w;
  const double g = 1.0 / peak;
  for (double& s : out.samples) s *= g;
  return out;
}

double energy(const Waveform& w) {
  double e = 0.0;
  for (double s : w.samples) e += s * s;
  return e;
}

namespace {

// Zeroth-order modified Bessel function, power series.  Converges fast for
// the beta values used here.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double half_x = 0.5 * x;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

Waveform resample(const Waveform& w, int target_rate_hz) {
  validate(w);
  if (target_rate_hz <= 0)
    throw std::invalid_argument("resample: target rate must be positive");
  if (target_rate_hz == w.sample_rate_hz) return w;
  if (w.samples.empty()) {
    Waveform out;
    out.sample_rate_hz = target_rate_hz;
    return out;
  }

  const int g = std::gcd(w.sample_rate_hz, target_rate_hz);
  const long long p = target_rate_hz / g;  // upsampling factor
  const long long q = w.sample_rate_hz / g;

  // Kaiser-windowed sinc interpolator evaluated at fractional input times.
  // Cutoff sits at the narrower of the two Nyquists, expressed in cycles per
  // input sample.
  const double cutoff = 0.5 * std::min(1.0, static_cast<double>(p) / q);
  const int half_width = 24;  // input samples; ~80 dB stopband with beta = 8
  const double beta = 8.0;
  const double i0_beta = bessel_i0(beta);

  const std::size_t in_len = w.samples.size();
  const std::size_t out_len =
      static_cast<std::size_t>((in_len * p + q - 1) / q);
  Waveform out;
  out.sample_rate_hz = target_rate_hz;
  out.samples.resize(out_len);

  for (std::size_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) * q / p;  // input-sample time
    const long long k0 = static_cast<long long>(std::ceil(t)) - half_width;
    const long long k1 = static_cast<long long>(std::floor(t)) + half_width;
    double acc = 0.0;
    for (long long k = std::max<long long>(k0, 0);
         k <= std::min<long long>(k1, static_cast<long long>(in_len) - 1);
         ++k) {
      const double u = t - static_cast<double>(k);
      const double x = u / half_width;
      if (x <= -1.0 || x >= 1.0) continue;
      const double window = bessel_i0(beta * std::sqrt(1.0 - x * x)) / i0_beta;
      const double arg = 2.0 * cutoff * u;
      double sinc;
      if (std::abs(arg) < 1e-12) {
        sinc = 1.0;
      } else {
        sinc = std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      }
      acc += w.samples[static_cast<std::size_t>(k)] * 2.0 * cutoff * sinc *
             window;
    }
    out.samples[n] = acc;
  }
  return out;
}

}  // namespace binderev
