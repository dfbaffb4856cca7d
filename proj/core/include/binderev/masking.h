// core/include/binderev/masking.h

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

#ifndef BINDEREV_MASKING_H_
#define BINDEREV_MASKING_H_

#include <numbers>
#include <vector>

#include "binderev/cues.h"
#include "binderev/grid.h"
#include "binderev/rir.h"
#include "binderev/stft.h"

namespace binderev {

// Probabilistic TF mask; every entry in [0, 1].
using SoftMask = Grid<double>;

// Complementary direct/reverberant mask pair; direct + reverb == 1 per bin.
struct MaskPair {
  SoftMask direct;
  SoftMask reverb;
};

MaskPair make_mask_pair(SoftMask direct);

// What a mask backend produces: one pair per cue type.  Fusion consumes the
// direct members only.
struct BackendMasks {
  MaskPair ipd;
  MaskPair ild;
};

// Three-way split of the one-sided spectrum at 1.5 / 4 / 8 kHz.  DC follows
// the low band, Nyquist the high band; with the canonical 1024-point frame
// at 16 kHz the positive-bin ranges are 1..96, 97..256, 257..512 and the
// edges land exactly on 1500 / 4000 / 8000 Hz.
struct BandPlan {
  std::size_t low_hi_bin;   // last bin of the low band (f <= 1.5 kHz)
  std::size_t mid_hi_bin;   // last bin of the mid band (f <= 4 kHz)
  std::size_t nyquist_bin;  // frame_len / 2
  std::size_t frame_len;
  int sample_rate_hz;

  enum class Band { kLow, kMid, kHigh };
  Band band_of(std::size_t bin) const {
    if (bin <= low_hi_bin) return Band::kLow;
    if (bin <= mid_hi_bin) return Band::kMid;
    return Band::kHigh;
  }
};

BandPlan make_band_plan(std::size_t frame_len, int sample_rate_hz);

// Expected direct-path cues per bin, with the Gaussian kernel widths the
// cue-template backend scores against.  Stands in for the trained model's
// knowledge of anechoic interaural geometry.
struct CueTemplates {
  std::vector<double> ild_template_db;
  std::vector<double> ipd_template_rad;
  double sigma_ild_db = 3.0;                      // mid/high bands
  double sigma_ipd_rad = std::numbers::pi / 6.0;  // low/mid bands
  double azimuth_deg = 0.0;
};

// Templates from the transfer-function ratio of a direct-path (order-0) RIR
// pair, evaluated at the bin centers of the given frame length.  Arguments
// follow the interaural-ratio channel order: channel 1 is the numerator.
// The toolkit puts the right microphone there, because the azimuth sweep of
// the measurement setup runs toward the right ear - that way the level
// template goes positive as the source swings right and the near ear gets
// louder.
CueTemplates build_templates(const Rir& anechoic_1, const Rir& anechoic_2,
                             const StftConfig& cfg, double azimuth_deg);

// Oracle ideal-ratio-mask backend: direct mask = D / (D + |X - D| + eps)
// from mic-averaged magnitudes D (direct) and X (mixture).  Both returned
// pairs are identical - the oracle has no notion of cue type.
BackendMasks oracle_irm_backend(const Spectrogram& mix_left,
                                const Spectrogram& mix_right,
                                const Spectrogram& direct_left,
                                const Spectrogram& direct_right,
                                double epsilon = kCueEpsilon);

// Deterministic cue scorer: direct masks are Gaussian kernels around the
// templates (circular distance for IPD), reverb masks their complements.
BackendMasks cue_template_backend(const CueGrid& cues,
                                  const CueTemplates& templates);

// Sub-band fusion: IPD mask below 1.5 kHz, IPD*ILD product in 1.5-4 kHz,
// ILD mask above 4 kHz.
SoftMask fuse_subband(const SoftMask& ipd_direct, const SoftMask& ild_direct,
                      const BandPlan& plan);

enum class Downmix { kSum, kAverage };

// istft(mask . X1 + mask . X2); average halves the sum.  The sum is the
// default downmix even though it doubles the amplitude of a coherent
// source - evaluation uses scale-invariant metrics.
Waveform apply_and_reconstruct(const SoftMask& mask, const Spectrogram& x1,
                               const Spectrogram& x2,
                               Downmix downmix = Downmix::kSum);

}  // namespace binderev

#endif  // BINDEREV_MASKING_H_
