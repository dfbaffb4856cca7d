// core/include/binderev/waveform.h

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

#ifndef BINDEREV_WAVEFORM_H_
#define BINDEREV_WAVEFORM_H_

#include <cstdint>
#include <vector>

namespace binderev {

// A sampled mono signal.  Amplitudes are nominally in [-1, 1] but nothing
// enforces that: convolution with a room response may overshoot and the
// pipeline keeps the headroom (clipping only happens on pcm16 export).
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Throws std::invalid_argument on NaN/Inf samples or non-positive rate.
void validate(const Waveform& w);

// Full linear convolution (length len(x) + len(taps) - 1), evaluated via FFT.
Waveform convolve(const Waveform& x, const std::vector<double>& taps);

// Peak normalization to |max| == 1.  Throws on all-zero input
// ("silent signal").
Waveform normalize(const Waveform& w);

// Band-limited rational resampling (polyphase windowed sinc).  Same-rate
// calls return the input unchanged.
Waveform resample(const Waveform& w, int target_rate_hz);

double energy(const Waveform& w);

}  // namespace binderev

#endif  // BINDEREV_WAVEFORM_H_
