// core/include/binderev/roomsim.h

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

#ifndef BINDEREV_ROOMSIM_H_
#define BINDEREV_ROOMSIM_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "binderev/rir.h"

namespace binderev {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Shoebox room with uniform wall reflectivity calibrated from a target RT60.
struct RoomSpec {
  Vec3 dims;           // length (x), width (y), height (z), metres
  double rt60_s = 0.0; // 0 means anechoic
  int sample_rate_hz = 16000;
  // Reflection-order cap; unset selects the smallest order whose wall-gain
  // product beta^order drops to 1e-3, itself capped at 40.
  std::optional<int> max_order;
  double speed_of_sound = 343.0;
};

void validate(const RoomSpec& room);

// Two-microphone broadside array.  The listener faces +x, the left mic sits
// at +y of the array center, and source azimuth grows toward the right mic
// (so at +90 degrees the right ear is the near ear).
struct ArrayGeometry {
  static constexpr double kMicSpacingM = 0.145;

  Vec3 array_center;
  double source_azimuth_deg = 0.0;  // one of {0, 15, 30, 45, 60, 75, 90}
  double source_distance_m = 1.0;   // 1.0 or 1.5

  Vec3 mic_left() const {
    return {array_center.x, array_center.y + kMicSpacingM / 2, array_center.z};
  }
  Vec3 mic_right() const {
    return {array_center.x, array_center.y - kMicSpacingM / 2, array_center.z};
  }
  Vec3 source_pos() const;
};

// Checks the azimuth/distance grids and that the source and both mics lie
// strictly inside the room.
void validate(const ArrayGeometry& geom, const RoomSpec& room);

enum class HeadModel { kNone, kSpherical };

// Eyring inversion: beta = sqrt(1 - alpha), alpha = 1 - exp(-0.161 V /(S T)).
// rt60_s == 0 returns 0 (anechoic).  Throws when the geometry cannot decay
// that fast (Sabine absorption requirement 0.161 V / (S T) >= 1, i.e. the
// required alpha reaches total absorption).
double reflection_coeff_from_rt60(const RoomSpec& room);

// Smallest order with beta^order <= 1e-3, clamped to [0, 40].
int default_max_order(double beta);

// Number of image sources the renderer enumerates up to the given reflection
// order (geometry-independent).  Visible so the enumeration can be validated
// against a brute-force count.
std::size_t image_count(int max_order);

// Image-source RIR from an arbitrary source to an arbitrary receiver, no
// head model.  Fractional tap positions use a 16-tap Hann-windowed sinc;
// the tap sequence is truncated once the remaining tail holds less than
// -60 dB of the total energy.
Rir image_source_rir(const RoomSpec& room, const Vec3& source_pos,
                     const Vec3& mic_pos);

// Binaural pair sharing one image enumeration.  With HeadModel::kSpherical
// every image contribution is shaded by a first-order head-shadow filter
// (one pole, one zero; documented in the implementation) parameterized by
// the image's incidence angle at each ear.
std::pair<Rir, Rir> binaural_rir_pair(const RoomSpec& room,
                                      const ArrayGeometry& geom,
                                      HeadModel head_model);

// Early/late split at direct_index + boundary_ms.  Both halves keep the
// original length (zero-filled outside their span) so early + late
// reproduces the input exactly.
std::pair<Rir, Rir> split_rir(const Rir& rir, double boundary_ms,
                              std::ptrdiff_t direct_index);

// Backward-integrated energy decay, line fit on the -5..-25 dB segment,
// RT60 = 3 x T20.  Throws "insufficient decay range" when the curve spans
// less than 35 dB.
double schroeder_rt60(const Rir& rir);

// Stereo float-32 WAV round trip for simulated/measured BRIR pairs.
void save_rir_pair(const Rir& left, const Rir& right, const std::string& path);
std::pair<Rir, Rir> load_rir_pair(const std::string& path);

}  // namespace binderev

#endif  // BINDEREV_ROOMSIM_H_
