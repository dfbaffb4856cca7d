// core/src/cues.cc

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

#include "binderev/cues.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace binderev {

namespace {

void check_pair(const Spectrogram& x1, const Spectrogram& x2, double epsilon) {
  if (!x1.data.same_shape(x2.data))
    throw std::invalid_argument("cues: spectrogram shape mismatch");
  if (x1.sample_rate_hz != x2.sample_rate_hz)
    throw std::invalid_argument("cues: sample rate mismatch");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("cues: epsilon must be positive");
}

}  // namespace

Grid<std::complex<double>> interaural_ratio(const Spectrogram& x1,
                                            const Spectrogram& x2,
                                            double epsilon) {
  check_pair(x1, x2, epsilon);
  Grid<std::complex<double>> out(x1.bins(), x1.frames());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::complex<double> a = x1.data.data()[i];
    const std::complex<double> b = x2.data.data()[i];
    const double mag_b = std::abs(b);
    if (mag_b >= epsilon) {
      out.data()[i] = a / b;
    } else {
      // Keep the denominator's phase, floor its magnitude.
      const std::complex<double> floored =
          (mag_b > 0.0) ? b * (epsilon / mag_b) : std::complex<double>(epsilon, 0.0);
      out.data()[i] = a / floored;
    }
  }
  return out;
}

CueGrid extract_cues(const Spectrogram& x1, const Spectrogram& x2,
                     double epsilon) {
  check_pair(x1, x2, epsilon);
  CueGrid cues;
  cues.ild_db = Grid<double>(x1.bins(), x1.frames());
  cues.ipd_rad = Grid<double>(x1.bins(), x1.frames());
  for (std::size_t i = 0; i < cues.ild_db.size(); ++i) {
    const std::complex<double> a = x1.data.data()[i];
    const std::complex<double> b = x2.data.data()[i];
    const double ma = std::max(std::abs(a), epsilon);
    const double mb = std::max(std::abs(b), epsilon);
    cues.ild_db.data()[i] = 20.0 * std::log10(ma / mb);
    double ipd = std::arg(a * std::conj(b));
    if (ipd <= -std::numbers::pi) ipd += 2.0 * std::numbers::pi;
    cues.ipd_rad.data()[i] = ipd;
  }
  return cues;
}

void dump_cue_csv(const CueGrid& cues, std::ostream& os) {
  os << "bin,frame,ild_db,ipd_rad\n";
  char line[128];
  for (std::size_t k = 0; k < cues.bins(); ++k) {
    for (std::size_t m = 0; m < cues.frames(); ++m) {
      std::snprintf(line, sizeof(line), "%zu,%zu,%.6f,%.6f\n", k, m,
                    cues.ild_db.at(k, m), cues.ipd_rad.at(k, m));
      os << line;
    }
  }
}

}  // namespace binderev
