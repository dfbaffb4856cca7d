// core/include/binderev/stft.h

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

#ifndef BINDEREV_STFT_H_
#define BINDEREV_STFT_H_

#include <complex>
#include <cstddef>
#include <vector>

#include "binderev/grid.h"
#include "binderev/waveform.h"

namespace binderev {

// Symmetric Hamming, w(p) = 0.54 - 0.46*cos(2*pi*p / (len - 1)).  Endpoints
// are 0.08, never zero, which the squared-window synthesis normalization
// relies on.
std::vector<double> hamming_window(std::size_t len);

struct StftConfig {
  std::size_t frame_len = 1024;
  std::size_t hop = 256;
  std::vector<double> window;  // empty -> hamming_window(frame_len)

  std::vector<double> effective_window() const {
    return window.empty() ? hamming_window(frame_len) : window;
  }
};

// Throws std::invalid_argument on: hop outside (0, frame_len], window length
// mismatch, or window coefficients outside (0, 1 + 1e-9].
void validate(const StftConfig& cfg);

struct Spectrogram {
  Grid<std::complex<double>> data;  // bins x frames, bins = frame_len/2 + 1
  StftConfig config;
  int sample_rate_hz = 16000;
  std::size_t original_len = 0;  // pre-padding length, for exact inversion

  std::size_t bins() const { return data.bins(); }
  std::size_t frames() const { return data.frames(); }
  double bin_hz(std::size_t bin) const {
    return static_cast<double>(bin) * sample_rate_hz / config.frame_len;
  }
};

// Analysis.  frame_len - hop zeros are prepended and appended so every
// original sample gets full window coverage; the final frame is zero-filled.
// frames == floor((padded_len - frame_len)/hop) + 1 over the zero-filled
// padded length.
Spectrogram stft(const Waveform& w, const StftConfig& cfg);

// Weighted overlap-add synthesis with squared-window normalization; exact
// inverse of stft up to roundoff.  Output is trimmed to original_len.
Waveform istft(const Spectrogram& spec);

// Sum of squared, hop-shifted window copies over a padded signal of the
// given length - the exact per-sample weight the synthesis divides by.
// Exposed because energy bookkeeping tests need the true profile (it is
// close to, but not exactly, a constant for the Hamming family).
std::vector<double> window_energy_profile(const StftConfig& cfg,
                                          std::size_t padded_len);

// Number of frames the padding policy yields for a given input length.
std::size_t stft_frame_count(std::size_t input_len, const StftConfig& cfg);

}  // namespace binderev

#endif  // BINDEREV_STFT_H_
