// core/include/binderev/signal_gen.h

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

#ifndef BINDEREV_SIGNAL_GEN_H_
#define BINDEREV_SIGNAL_GEN_H_

#include <cstdint>

#include "binderev/waveform.h"

namespace binderev {

// Deterministic speech-like test utterance: phrases of back-to-back voiced
// phones (harmonic series under a three-formant envelope whose targets hop
// per phone with short coarticulation ramps, drifting f0) separated by
// pauses, peak-normalized.  Same seed, same samples, on every platform.
//
// Two deliberate choices.  All-voiced: fricative-style noise bursts put
// broadband high-rate energy into the modulation spectrum, which is exactly
// what a reverberant tail adds, and that washes out reference-free
// reverberation measures.  Phone-rate formant hopping: individual frequency
// bands then swing tens of dB at 5-12 Hz, the structure temporal smearing
// destroys; a signal carrying only a syllable on/off gate stays implausibly
// correlated with its reverberant copy.
Waveform make_utterance(std::uint64_t seed, double duration_s = 1.05,
                        double sample_rate_hz = 16000.0);

// Gaussian white noise, peak-normalized.
Waveform make_noise(std::uint64_t seed, double duration_s,
                    double sample_rate_hz = 16000.0);

}  // namespace binderev

#endif  // BINDEREV_SIGNAL_GEN_H_
