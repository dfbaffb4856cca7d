// core/src/wav_io.cc

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

#include "binderev/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace binderev {

namespace {

// All RIFF fields are little-endian; this code assumes a little-endian host
// (checked nowhere else in the tree, and every supported target is LE).
uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void append_u32(std::string* s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u16(std::string* s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>((v >> 8) & 0xff));
}

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatIeeeFloat = 3;

}  // namespace

std::vector<Waveform> load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_wav: cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("load_wav: not a RIFF/WAVE file: " + path);

  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  const unsigned char* data_ptr = nullptr;
  uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    uint32_t chunk_len = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) chunk_len = static_cast<uint32_t>(bytes.size() - body);
    if (std::memcmp(hdr, "fmt ", 4) == 0 && chunk_len >= 16) {
      const unsigned char* f = bytes.data() + body;
      format_tag = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw std::runtime_error("load_wav: missing fmt chunk: " + path);
  if (data_ptr == nullptr)
    throw std::runtime_error("load_wav: missing data chunk: " + path);
  const bool pcm16 = (format_tag == kFormatPcm && bits == 16);
  const bool float32 = (format_tag == kFormatIeeeFloat && bits == 32);
  if (!pcm16 && !float32)
    throw std::runtime_error(
        "load_wav: unsupported encoding (need 16-bit PCM or 32-bit float): " +
        path);
  if (channels != 1 && channels != 2)
    throw std::runtime_error("load_wav: unsupported channel count: " + path);
  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = data_len / frame_bytes;
  if (n_frames == 0) throw std::runtime_error("load_wav: zero-length data: " + path);

  std::vector<Waveform> out(channels);
  for (auto& w : out) {
    w.sample_rate_hz = static_cast<int>(sample_rate);
    w.samples.resize(n_frames);
  }
  for (std::size_t i = 0; i < n_frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      const unsigned char* s = data_ptr + (i * channels + c) * bytes_per_sample;
      if (pcm16) {
        int16_t v;
        std::memcpy(&v, s, 2);
        out[c].samples[i] = static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, s, 4);
        out[c].samples[i] = static_cast<double>(v);
      }
    }
  }
  return out;
}

std::size_t save_wav(const std::vector<Waveform>& channels,
                     const std::string& path, WavFormat format) {
  if (channels.empty() || channels.size() > 2)
    throw std::invalid_argument("save_wav: need 1 or 2 channels");
  const std::size_t n = channels[0].samples.size();
  const int rate = channels[0].sample_rate_hz;
  for (const auto& c : channels) {
    validate(c);
    if (c.samples.size() != n || c.sample_rate_hz != rate)
      throw std::invalid_argument("save_wav: channel length/rate mismatch");
  }

  const uint16_t nch = static_cast<uint16_t>(channels.size());
  const bool pcm = (format == WavFormat::kPcm16);
  const uint16_t bits = pcm ? 16 : 32;
  const uint32_t byte_rate = static_cast<uint32_t>(rate) * nch * (bits / 8);
  const uint16_t block_align = static_cast<uint16_t>(nch * (bits / 8));
  const uint32_t data_len = static_cast<uint32_t>(n * block_align);

  std::string buf;
  buf.reserve(44 + data_len);
  buf.append("RIFF");
  append_u32(&buf, 36 + data_len);
  buf.append("WAVE");
  buf.append("fmt ");
  append_u32(&buf, 16);
  append_u16(&buf, pcm ? kFormatPcm : kFormatIeeeFloat);
  append_u16(&buf, nch);
  append_u32(&buf, static_cast<uint32_t>(rate));
  append_u32(&buf, byte_rate);
  append_u16(&buf, block_align);
  append_u16(&buf, bits);
  buf.append("data");
  append_u32(&buf, data_len);

  std::size_t clipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (uint16_t c = 0; c < nch; ++c) {
      const double v = channels[c].samples[i];
      if (pcm) {
        double scaled = v * 32768.0;
        if (scaled > 32767.0) {
          scaled = 32767.0;
          ++clipped;
        } else if (scaled < -32768.0) {
          scaled = -32768.0;
          ++clipped;
        }
        const int16_t q = static_cast<int16_t>(std::lrint(scaled));
        buf.push_back(static_cast<char>(q & 0xff));
        buf.push_back(static_cast<char>((q >> 8) & 0xff));
      } else {
        const float f = static_cast<float>(v);
        char raw[4];
        std::memcpy(raw, &f, 4);
        buf.append(raw, 4);
      }
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_wav: cannot write file: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("save_wav: short write: " + path);

  if (clipped > 0)
    std::cerr << "save_wav: warning: clipped " << clipped
              << " sample(s) to pcm16 full scale in " << path << "\n";
  return clipped;
}

}  // namespace binderev
