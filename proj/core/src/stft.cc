// core/src/stft.cc

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

#include "binderev/stft.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "binderev/fft.h"

namespace binderev {

std::vector<double> hamming_window(std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (len <= 1) return w;
  const double denom = static_cast<double>(len - 1);
  for (std::size_t p = 0; p < len; ++p)
    w[p] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * p / denom);
  return w;
}

void validate(const StftConfig& cfg) {
  if (cfg.frame_len == 0)
    throw std::invalid_argument("stft config: frame_len must be positive");
  if ((cfg.frame_len & (cfg.frame_len - 1)) != 0)
    throw std::invalid_argument("stft config: frame_len must be a power of two");
  if (cfg.hop == 0 || cfg.hop > cfg.frame_len)
    throw std::invalid_argument("stft config: need 0 < hop <= frame_len");
  if (!cfg.window.empty()) {
    if (cfg.window.size() != cfg.frame_len)
      throw std::invalid_argument("stft config: window length != frame_len");
    for (double v : cfg.window)
      if (!(v > 0.0) || v > 1.0 + 1e-9)
        throw std::invalid_argument(
            "stft config: window coefficients must lie in (0, 1]");
  }
}

namespace {

struct PaddingPlan {
  std::size_t pad;         // zeros prepended and appended
  std::size_t frames;      // frame count over the zero-filled padded signal
  std::size_t padded_len;  // frame_len + (frames - 1) * hop
};

PaddingPlan plan_padding(std::size_t input_len, const StftConfig& cfg) {
  PaddingPlan plan;
  plan.pad = cfg.frame_len - cfg.hop;
  const std::size_t covered = input_len + 2 * plan.pad;
  if (covered < cfg.frame_len)
    throw std::invalid_argument(
        "stft: signal shorter than one frame after padding");
  // Last frame is zero-filled up to a whole hop.
  const std::size_t steps =
      (covered - cfg.frame_len + cfg.hop - 1) / cfg.hop;
  plan.frames = steps + 1;
  plan.padded_len = cfg.frame_len + steps * cfg.hop;
  return plan;
}

}  // namespace

std::size_t stft_frame_count(std::size_t input_len, const StftConfig& cfg) {
  validate(cfg);
  return plan_padding(input_len, cfg).frames;
}

Spectrogram stft(const Waveform& w, const StftConfig& cfg) {
  validate(w);
  validate(cfg);
  const auto window = cfg.effective_window();
  const auto plan = plan_padding(w.samples.size(), cfg);
  const std::size_t n_bins = cfg.frame_len / 2 + 1;

  std::vector<double> padded(plan.padded_len, 0.0);
  std::copy(w.samples.begin(), w.samples.end(), padded.begin() + plan.pad);

  Spectrogram spec;
  spec.config = cfg;
  spec.sample_rate_hz = w.sample_rate_hz;
  spec.original_len = w.samples.size();
  spec.data = Grid<std::complex<double>>(n_bins, plan.frames);

  std::vector<double> frame(cfg.frame_len);
  for (std::size_t m = 0; m < plan.frames; ++m) {
    const double* src = padded.data() + m * cfg.hop;
    for (std::size_t p = 0; p < cfg.frame_len; ++p)
      frame[p] = src[p] * window[p];
    const auto bins = rfft(frame, cfg.frame_len);
    for (std::size_t k = 0; k < n_bins; ++k) spec.data.at(k, m) = bins[k];
  }
  return spec;
}

std::vector<double> window_energy_profile(const StftConfig& cfg,
                                          std::size_t padded_len) {
  validate(cfg);
  const auto window = cfg.effective_window();
  std::vector<double> profile(padded_len, 0.0);
  for (std::size_t start = 0; start + cfg.frame_len <= padded_len;
       start += cfg.hop)
    for (std::size_t p = 0; p < cfg.frame_len; ++p)
      profile[start + p] += window[p] * window[p];
  return profile;
}

Waveform istft(const Spectrogram& spec) {
  const StftConfig& cfg = spec.config;
  validate(cfg);
  const auto window = cfg.effective_window();
  const std::size_t n_bins = cfg.frame_len / 2 + 1;
  if (spec.data.bins() != n_bins)
    throw std::invalid_argument("istft: bin count does not match config");

  const std::size_t frames = spec.data.frames();
  const std::size_t padded_len = cfg.frame_len + (frames - 1) * cfg.hop;
  const std::size_t pad = cfg.frame_len - cfg.hop;
  if (spec.original_len + pad > padded_len)
    throw std::invalid_argument("istft: original_len inconsistent with frames");

  std::vector<double> acc(padded_len, 0.0);
  std::vector<std::complex<double>> bins(n_bins);
  for (std::size_t m = 0; m < frames; ++m) {
    for (std::size_t k = 0; k < n_bins; ++k) bins[k] = spec.data.at(k, m);
    const auto frame = irfft(bins, cfg.frame_len);
    double* dst = acc.data() + m * cfg.hop;
    for (std::size_t p = 0; p < cfg.frame_len; ++p)
      dst[p] += frame[p] * window[p];
  }

  const auto profile = window_energy_profile(cfg, padded_len);
  Waveform out;
  out.sample_rate_hz = spec.sample_rate_hz;
  out.samples.resize(spec.original_len);
  for (std::size_t i = 0; i < spec.original_len; ++i) {
    const double norm = profile[pad + i];
    if (norm < 1e-12)
      throw std::runtime_error("istft: degenerate window normalization");
    out.samples[i] = acc[pad + i] / norm;
  }
  return out;
}

}  // namespace binderev
