// core/include/binderev/rir.h

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

#ifndef BINDEREV_RIR_H_
#define BINDEREV_RIR_H_

#include <cstddef>
#include <vector>

namespace binderev {

// Room impulse response tap sequence for one receiver.
struct Rir {
  enum class Channel { kMono, kLeft, kRight };

  std::vector<double> taps;
  int sample_rate_hz = 16000;
  Channel channel = Channel::kMono;
  // Tap index of the direct arrival when known (filled by the simulator,
  // detected at the energy peak for imported responses); -1 if unknown.
  std::ptrdiff_t direct_index = -1;

  std::size_t size() const { return taps.size(); }
};

}  // namespace binderev

#endif  // BINDEREV_RIR_H_
