// core/include/binderev/metrics.h

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

#ifndef BINDEREV_METRICS_H_
#define BINDEREV_METRICS_H_

#include <utility>

#include "binderev/waveform.h"

namespace binderev {

inline constexpr double kSdrCapDb = 100.0;

struct MetricsReport {
  double sdr_db = 0.0;
  double stoi = 0.0;     // clamped to [0, 1] for reporting
  double srmr_db = 0.0;
  double cd = 0.0;       // dB-scaled cepstral distance, lower is better
};

// Shifts the estimate by the cross-correlation-peak lag (max |corr|,
// searched over +-4096 samples) and trims both signals to the overlap.
// Throws on zero-energy input or rate mismatch.
std::pair<Waveform, Waveform> align_and_trim(const Waveform& reference,
                                             const Waveform& estimate);

// Scale-invariant SDR: the estimate is projected onto the reference;
// 10*log10(|s|^2/|e|^2), capped at +100 dB (reached exactly for any
// rescaled copy of the reference).
double si_sdr(const Waveform& reference, const Waveform& estimate);

// Short-time objective intelligibility (the standard correlation-based
// pipeline: 10 kHz internal rate, 25.6 ms frames with 50% overlap, 512-point
// spectra, 15 one-third-octave bands from 150 Hz, 384 ms segments, -15 dB
// clipping, silent-frame removal at 40 dB).  Returns the raw mean
// correlation, which can fall slightly below 0 for adversarial estimates;
// reporting clamps to [0, 1].
double stoi(const Waveform& reference, const Waveform& estimate);

// Reference-free speech-to-reverberation modulation energy ratio, in dB:
// 23 gammatone channels (125 Hz to a quarter of the sample rate), Hilbert
// envelopes, 8 modulation bands log-spaced 4-128 Hz; ratio of modulation
// energy in bands 1-4 over bands 5-8.  Simplified reimplementation - only
// comparative use is supported (absolute values differ from the reference
// toolbox).  Throws on silent or modulation-free input.
double srmr(const Waveform& estimate);

// Frame-mean cepstral distance (24 coefficients, c0 excluded, 40 dB frame
// energy gate, canonical STFT framing), symmetric in its arguments.
double cepstral_distance(const Waveform& reference, const Waveform& estimate);

// All four metrics: SRMR on the unaligned estimate (reference-free), the
// rest after align_and_trim.  STOI is clamped to [0, 1] here.
MetricsReport evaluate(const Waveform& reference, const Waveform& estimate);

}  // namespace binderev

#endif  // BINDEREV_METRICS_H_
