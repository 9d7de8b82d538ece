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

#ifndef VOXMASK_AUDIO_HPP_
#define VOXMASK_AUDIO_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "voxmask/error.hpp"

namespace voxmask {

// Mono signal with nominal amplitude range [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

inline void ValidateAudio(const AudioBuffer& buf) {
  if (buf.sample_rate <= 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "sample rate must be positive, got " +
                    std::to_string(buf.sample_rate));
  }
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    if (!std::isfinite(buf.samples[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "non-finite sample at index " + std::to_string(i));
    }
  }
}

inline double Rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

// SNR of `test` against `reference` over [begin, end), in dB.
inline double SnrDb(const std::vector<double>& reference,
                    const std::vector<double>& test, std::size_t begin,
                    std::size_t end) {
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = begin; i < end && i < reference.size() &&
                              i < test.size();
       ++i) {
    signal += reference[i] * reference[i];
    const double d = reference[i] - test[i];
    noise += d * d;
  }
  if (noise == 0.0) return INFINITY;
  return 10.0 * std::log10(signal / noise);
}

}  // namespace voxmask

#endif  // VOXMASK_AUDIO_HPP_
