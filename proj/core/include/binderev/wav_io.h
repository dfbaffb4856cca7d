// core/include/binderev/wav_io.h

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

#ifndef BINDEREV_WAV_IO_H_
#define BINDEREV_WAV_IO_H_

#include <string>
#include <vector>

#include "binderev/waveform.h"

namespace binderev {

enum class WavFormat { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file.  Accepts 16-bit PCM and 32-bit IEEE float, mono or
// stereo; one Waveform per channel.  PCM samples are scaled by 1/32768.
// Throws std::runtime_error with a distinct message for a missing file, an
// unsupported encoding, or an empty data chunk ("zero-length data").
std::vector<Waveform> load_wav(const std::string& path);

// Writes 1 or 2 equal-length channels.  pcm16 saturates out-of-range samples
// and returns the clip count (also warned once on stderr); float32 is exact
// and always returns 0.
std::size_t save_wav(const std::vector<Waveform>& channels,
                     const std::string& path,
                     WavFormat format = WavFormat::kPcm16);

inline std::size_t save_wav(const Waveform& w, const std::string& path,
                            WavFormat format = WavFormat::kPcm16) {
  return save_wav(std::vector<Waveform>{w}, path, format);
}

}  // namespace binderev

#endif  // BINDEREV_WAV_IO_H_
