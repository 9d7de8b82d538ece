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

#ifndef VOXMASK_STFT_HPP_
#define VOXMASK_STFT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "voxmask/audio.hpp"
#include "voxmask/error.hpp"
#include "voxmask/fft.hpp"

namespace voxmask {

enum class WindowKind { kHann, kHamming };

struct StftConfig {
  std::size_t frame_len = 1024;
  std::size_t hop = 256;
  WindowKind window = WindowKind::kHann;
};

// Complex half-spectrum; bin k sits at normalized frequency pi * k / (n - 1).
struct SpectralFrame {
  std::vector<std::complex<double>> bins;

  std::size_t size() const { return bins.size(); }
  double omega(std::size_t k) const {
    return std::numbers::pi * static_cast<double>(k) /
           static_cast<double>(bins.size() - 1);
  }
};

struct Spectrogram {
  std::vector<SpectralFrame> frames;
  StftConfig config;
  int sample_rate = 16000;
  // Length of the analysed signal; Istft reproduces exactly this many samples.
  std::size_t num_samples = 0;
};

// Periodic window, the variant that tiles exactly under overlap-add.
inline std::vector<double> MakeWindow(WindowKind kind, std::size_t n) {
  std::vector<double> w(n);
  const double a = kind == WindowKind::kHann ? 0.5 : 0.54;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = a - (1.0 - a) * std::cos(2.0 * std::numbers::pi *
                                    static_cast<double>(i) /
                                    static_cast<double>(n));
  }
  return w;
}

inline bool IsPowerOfTwo(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline void ValidateStftConfig(const StftConfig& cfg) {
  if (!IsPowerOfTwo(cfg.frame_len) || cfg.frame_len < 4) {
    throw Error(ErrorKind::kInvalidConfig,
                "frame_len must be a power of two >= 4, got " +
                    std::to_string(cfg.frame_len));
  }
  if (cfg.hop == 0 || cfg.hop > cfg.frame_len) {
    throw Error(ErrorKind::kInvalidConfig,
                "hop must be in (0, frame_len], got " + std::to_string(cfg.hop));
  }
}

// Maximum relative deviation of the squared-window overlap sum from its mean.
// Analysis and synthesis both apply the window, so w^2 is what must tile.
inline double ColaDeviation(const StftConfig& cfg) {
  const std::vector<double> w = MakeWindow(cfg.window, cfg.frame_len);
  std::vector<double> sum(cfg.hop, 0.0);
  for (std::size_t i = 0; i < cfg.frame_len; ++i) sum[i % cfg.hop] += w[i] * w[i];
  const auto [lo, hi] = std::minmax_element(sum.begin(), sum.end());
  const double mean = 0.5 * (*lo + *hi);
  return (*hi - *lo) / mean;
}

inline bool SatisfiesCola(const StftConfig& cfg) {
  return ColaDeviation(cfg) <= 1e-6;
}

inline std::size_t FrameCount(std::size_t num_samples, const StftConfig& cfg) {
  if (num_samples <= cfg.frame_len) return 1;
  return (num_samples - cfg.frame_len) / cfg.hop + 1;
}

inline Spectrogram Stft(const AudioBuffer& buf, const StftConfig& cfg) {
  ValidateStftConfig(cfg);
  const std::size_t n = cfg.frame_len;
  const std::vector<double> window = MakeWindow(cfg.window, n);
  const RealFft fft(n);

  Spectrogram spec;
  spec.config = cfg;
  spec.sample_rate = buf.sample_rate;
  spec.num_samples = buf.size();

  const std::size_t count = FrameCount(buf.size(), cfg);
  spec.frames.resize(count);
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * cfg.hop;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = start + i;
      frame[i] = idx < buf.size() ? buf.samples[idx] * window[i] : 0.0;
    }
    spec.frames[t].bins.resize(fft.bins());
    fft.Forward(frame, spec.frames[t].bins);
  }
  return spec;
}

// Weighted overlap-add: each frame is windowed again and the sum divided by
// the accumulated squared window. Samples where that sum falls below 1e-3 of
// its peak (the outermost edges) are divided by the floor instead.
inline AudioBuffer Istft(const Spectrogram& spec) {
  const StftConfig& cfg = spec.config;
  ValidateStftConfig(cfg);
  if (!SatisfiesCola(cfg)) {
    throw Error(ErrorKind::kInvalidConfig,
                "window/hop pair does not satisfy constant overlap-add");
  }
  const std::size_t n = cfg.frame_len;
  const std::vector<double> window = MakeWindow(cfg.window, n);
  const RealFft fft(n);

  const std::size_t span =
      spec.frames.empty() ? 0 : (spec.frames.size() - 1) * cfg.hop + n;
  std::vector<double> acc(std::max(span, spec.num_samples), 0.0);
  std::vector<double> norm(acc.size(), 0.0);
  std::vector<double> frame(n);
  for (std::size_t t = 0; t < spec.frames.size(); ++t) {
    if (spec.frames[t].bins.size() != fft.bins()) {
      throw Error(ErrorKind::kInvalidConfig,
                  "frame " + std::to_string(t) + " has " +
                      std::to_string(spec.frames[t].bins.size()) + " bins");
    }
    fft.Inverse(spec.frames[t].bins, frame);
    const std::size_t start = t * cfg.hop;
    for (std::size_t i = 0; i < n; ++i) {
      acc[start + i] += frame[i] * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }

  const double peak =
      norm.empty() ? 0.0 : *std::max_element(norm.begin(), norm.end());
  const double floor = 1e-3 * peak;
  AudioBuffer out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(spec.num_samples, 0.0);
  for (std::size_t i = 0; i < spec.num_samples; ++i) {
    if (norm[i] > 0.0) out.samples[i] = acc[i] / std::max(norm[i], floor);
  }
  return out;
}

}  // namespace voxmask

#endif  // VOXMASK_STFT_HPP_
