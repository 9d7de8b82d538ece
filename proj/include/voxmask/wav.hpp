// Copyright 2026 The Voxmask Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXMASK_WAV_HPP_
#define VOXMASK_WAV_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "voxmask/audio.hpp"
#include "voxmask/error.hpp"

namespace voxmask {

namespace wav_internal {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

inline std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

inline void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
}

inline double DecodeSample(const unsigned char* p, std::uint16_t format,
                           int bits) {
  if (format == kFormatFloat) {
    float f;
    std::uint32_t raw = ReadU32(p);
    std::memcpy(&f, &raw, sizeof(f));
    return f;
  }
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
  }
  return 0.0;
}

}  // namespace wav_internal

// Parses an in-memory RIFF/WAVE image. Integer PCM (8/16/24/32-bit) and
// 32-bit IEEE float are accepted; channels are averaged to mono.
inline AudioBuffer DecodeWav(const std::vector<unsigned char>& bytes) {
  using namespace wav_internal;
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorKind::kMalformedWav, "missing RIFF/WAVE header");
  }

  bool have_fmt = false;
  std::uint16_t format = 0;
  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t chunk_size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + chunk_size > bytes.size()) {
        throw Error(ErrorKind::kMalformedWav, "truncated fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      sample_rate = static_cast<int>(ReadU32(f + 4));
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 26) {
          throw Error(ErrorKind::kMalformedWav, "truncated extensible fmt");
        }
        format = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) {
        throw Error(ErrorKind::kMalformedWav, "data chunk before fmt chunk");
      }
      if (format != kFormatPcm && format != kFormatFloat) {
        throw Error(ErrorKind::kUnsupportedEncoding,
                    "format tag " + std::to_string(format));
      }
      const bool pcm_ok = format == kFormatPcm &&
                          (bits == 8 || bits == 16 || bits == 24 || bits == 32);
      const bool float_ok = format == kFormatFloat && bits == 32;
      if (!pcm_ok && !float_ok) {
        throw Error(ErrorKind::kUnsupportedEncoding,
                    std::to_string(bits) + "-bit samples");
      }
      if (channels <= 0 || sample_rate <= 0) {
        throw Error(ErrorKind::kMalformedWav, "invalid channel count or rate");
      }
      if (body + chunk_size > bytes.size()) {
        throw Error(ErrorKind::kMalformedWav, "truncated data chunk");
      }
      const std::size_t bytes_per_sample = static_cast<std::size_t>(bits) / 8;
      const std::size_t frame_bytes = bytes_per_sample * channels;
      const std::size_t n_frames = chunk_size / frame_bytes;

      AudioBuffer buf;
      buf.sample_rate = sample_rate;
      buf.samples.resize(n_frames);
      const unsigned char* data = bytes.data() + body;
      for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
          acc += DecodeSample(data + i * frame_bytes + c * bytes_per_sample,
                              format, bits);
        }
        const double v = acc / channels;
        if (!std::isfinite(v)) {
          throw Error(ErrorKind::kMalformedWav,
                      "non-finite sample at frame " + std::to_string(i));
        }
        buf.samples[i] = v;
      }
      return buf;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  throw Error(ErrorKind::kMalformedWav, have_fmt ? "missing data chunk"
                                                 : "missing fmt chunk");
}

// 16-bit PCM mono image; samples are clipped to [-1, 1) before quantization.
inline std::vector<unsigned char> EncodeWav(const AudioBuffer& buf) {
  using namespace wav_internal;
  ValidateAudio(buf);
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(buf.samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(buf.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(out, data_bytes);
  for (double s : buf.samples) {
    const double code = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto q = static_cast<std::int16_t>(std::clamp(code, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

inline AudioBuffer ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return DecodeWav(bytes);
}

inline void WriteWav(const std::filesystem::path& path, const AudioBuffer& buf) {
  const std::vector<unsigned char> bytes = EncodeWav(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorKind::kIoFailure, "short write to " + path.string());
  }
}

}  // namespace voxmask

#endif  // VOXMASK_WAV_HPP_
