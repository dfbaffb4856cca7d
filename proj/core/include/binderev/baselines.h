// core/include/binderev/baselines.h

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

#ifndef BINDEREV_BASELINES_H_
#define BINDEREV_BASELINES_H_

#include <vector>

#include "binderev/grid.h"
#include "binderev/stft.h"
#include "binderev/waveform.h"

namespace binderev {

// Late-reverberation spectral subtraction (statistical RIR model with
// exponential decay).
struct SpecSubConfig {
  double rt60_s = 0.5;            // assumed reverberation time
  double late_boundary_ms = 50.0; // early/late split driving the PSD delay
  double gain_floor = 0.1;        // linear spectral floor
  double smoothing = 0.9;         // recursive PSD averaging constant
};

void validate(const SpecSubConfig& cfg);

// Gain rule per TF bin: G = max(1 - sqrt(lambda_late / lambda_x),
// gain_floor), lambda_late(w, m) = exp(-2 rho T_l) lambda_x(w, m - N_l),
// rho = 3 ln(10) / rt60.  The first N_l frames pass through with gain 1
// (no delayed PSD exists yet).  Phase is kept.  When gains_out is non-null
// the applied gain grid is copied there so callers can assert the floor
// and no-amplification bounds exactly.
Waveform spectral_subtraction(const Waveform& x, const SpecSubConfig& cfg,
                              const StftConfig& stft_cfg,
                              Grid<double>* gains_out = nullptr);

// Weighted-prediction-error multichannel linear prediction, per frequency
// bin, with the iterative PSD reweighting scheme.
struct WpeConfig {
  int prediction_delay_frames = 3;  // D
  int filter_order_taps = 10;       // K
  int iterations = 3;
  double psd_floor = 1e-10;
  double ridge_scale = 1e-10;       // diagonal loading, times trace(R)
};

void validate(const WpeConfig& cfg);

// Returns the dereverberated spectrograms (channel count preserved).  When
// residuals_out is non-null it receives, per iteration, the per-bin
// prediction-error objective under that iteration's PSD weights,
// sum_m mean_c|d_c(m)|^2 / lambda(m) + ln lambda(m).  Each half-step of the
// alternation lowers this quantity, so it decreases monotonically across
// iterations (up to the diagonal-loading perturbation); the raw residual
// energy sum |d|^2 does not, and is deliberately not reported.
std::vector<Spectrogram> wpe(
    const std::vector<Spectrogram>& channels, const WpeConfig& cfg,
    std::vector<std::vector<double>>* residuals_out = nullptr);

}  // namespace binderev

#endif  // BINDEREV_BASELINES_H_
