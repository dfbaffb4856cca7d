// core/include/binderev/cues.h

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

#ifndef BINDEREV_CUES_H_
#define BINDEREV_CUES_H_

#include <complex>
#include <iosfwd>

#include "binderev/grid.h"
#include "binderev/stft.h"

namespace binderev {

// Interaural level difference (dB, channel 1 over channel 2) and phase
// difference (radians, wrapped to (-pi, pi]) per TF bin.  The pipeline feeds
// the right microphone as channel 1: azimuths in the measurement setup sweep
// toward the right ear, so cues grow positive as the source moves that way.
struct CueGrid {
  Grid<double> ild_db;
  Grid<double> ipd_rad;

  std::size_t bins() const { return ild_db.bins(); }
  std::size_t frames() const { return ild_db.frames(); }
};

inline constexpr double kCueEpsilon = 1e-12;

// Per-bin ratio X1/X2 with |X2| floored at epsilon, so silent bins stay
// finite.
Grid<std::complex<double>> interaural_ratio(const Spectrogram& x1,
                                            const Spectrogram& x2,
                                            double epsilon = kCueEpsilon);

// ild_db = 20*log10(max(|X1|, eps) / max(|X2|, eps));
// ipd_rad = arg(X1 * conj(X2)) - the wrapped phase of the interaural ratio,
// computed from the conjugate product so tiny denominators cannot blow up.
CueGrid extract_cues(const Spectrogram& x1, const Spectrogram& x2,
                     double epsilon = kCueEpsilon);

// Debug dump, one row per TF point: bin,frame,ild_db,ipd_rad.
void dump_cue_csv(const CueGrid& cues, std::ostream& os);

}  // namespace binderev

#endif  // BINDEREV_CUES_H_
