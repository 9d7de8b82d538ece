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

#ifndef VOXMASK_FEATURES_HPP_
#define VOXMASK_FEATURES_HPP_

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
#include "voxmask/stft.hpp"

namespace voxmask {

struct FeatureConfig {
  int order = 12;  // P, cepstral coefficients kept (c1..cP)
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double preemphasis = 0.97;
  int n_mel = 24;
  double low_hz = 0.0;
  double high_hz = 0.0;  // 0 selects the Nyquist frequency
};

struct FeatureSequence {
  std::vector<std::vector<double>> vectors;

  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

inline double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Triangular filters equally spaced on the mel scale, evaluated on the
// bins of an fft_len-point real FFT. Row-major n_mel x (fft_len / 2 + 1).
inline std::vector<std::vector<double>> MelFilterbank(int n_mel,
                                                      std::size_t fft_len,
                                                      int sample_rate,
                                                      double low_hz,
                                                      double high_hz) {
  const std::size_t nbins = fft_len / 2 + 1;
  const double lo = HzToMel(low_hz);
  const double hi = HzToMel(high_hz);
  std::vector<double> edges(static_cast<std::size_t>(n_mel) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(n_mel + 1));
  }
  std::vector<std::vector<double>> bank(static_cast<std::size_t>(n_mel),
                                        std::vector<double>(nbins, 0.0));
  for (int m = 0; m < n_mel; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    for (std::size_t k = 0; k < nbins; ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(fft_len);
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      bank[m][k] = w;
    }
  }
  return bank;
}

inline void ValidateFeatureConfig(const FeatureConfig& cfg) {
  if (cfg.order < 2) {
    throw Error(ErrorKind::kInvalidConfig, "cepstral order must be >= 2");
  }
  if (cfg.n_mel <= cfg.order) {
    throw Error(ErrorKind::kInvalidConfig,
                "n_mel must exceed the cepstral order");
  }
  if (!(cfg.frame_ms > 0.0) || !(cfg.hop_ms > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "frame and hop must be positive");
  }
}

// Mel-frequency cepstra c1..cP: pre-emphasis, Hann frames, magnitude
// spectrum, mel filterbank, log (floored at 1e-10), orthonormal DCT-II.
inline FeatureSequence ExtractCepstra(const AudioBuffer& buf,
                                      const FeatureConfig& cfg = {}) {
  ValidateFeatureConfig(cfg);
  const auto frame_len = static_cast<std::size_t>(
      std::lround(cfg.frame_ms * buf.sample_rate / 1000.0));
  const auto hop = static_cast<std::size_t>(
      std::lround(cfg.hop_ms * buf.sample_rate / 1000.0));
  if (frame_len == 0 || hop == 0 || buf.size() < frame_len) {
    throw Error(ErrorKind::kTooShort,
                "need at least " + std::to_string(frame_len) +
                    " samples, got " + std::to_string(buf.size()));
  }
  std::size_t fft_len = 1;
  while (fft_len < frame_len) fft_len <<= 1;

  const double high = cfg.high_hz > 0.0 ? cfg.high_hz : buf.sample_rate / 2.0;
  const auto bank = MelFilterbank(cfg.n_mel, fft_len, buf.sample_rate,
                                  cfg.low_hz, high);
  const std::vector<double> window = MakeWindow(WindowKind::kHann, frame_len);
  const RealFft fft(fft_len);

  const auto n_mel = static_cast<std::size_t>(cfg.n_mel);
  std::vector<std::vector<double>> dct(static_cast<std::size_t>(cfg.order),
                                       std::vector<double>(n_mel));
  const double scale = std::sqrt(2.0 / static_cast<double>(n_mel));
  for (int i = 1; i <= cfg.order; ++i) {
    for (std::size_t m = 0; m < n_mel; ++m) {
      dct[i - 1][m] = scale * std::cos(std::numbers::pi * i *
                                       (static_cast<double>(m) + 0.5) /
                                       static_cast<double>(n_mel));
    }
  }

  std::vector<double> emphasized(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    emphasized[i] =
        buf.samples[i] - (i > 0 ? cfg.preemphasis * buf.samples[i - 1] : 0.0);
  }

  const std::size_t count = (buf.size() - frame_len) / hop + 1;
  FeatureSequence seq;
  seq.vectors.reserve(count);
  std::vector<double> frame(fft_len, 0.0);
  std::vector<std::complex<double>> spectrum(fft.bins());
  std::vector<double> log_energy(n_mel);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < frame_len; ++i) {
      frame[i] = emphasized[start + i] * window[i];
    }
    fft.Forward(frame, spectrum);
    for (std::size_t m = 0; m < n_mel; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < spectrum.size(); ++k) {
        if (bank[m][k] != 0.0) e += bank[m][k] * std::abs(spectrum[k]);
      }
      log_energy[m] = std::log(std::max(e, 1e-10));
    }
    std::vector<double> c(static_cast<std::size_t>(cfg.order));
    for (std::size_t i = 0; i < c.size(); ++i) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n_mel; ++m) acc += dct[i][m] * log_energy[m];
      c[i] = acc;
    }
    seq.vectors.push_back(std::move(c));
  }
  return seq;
}

}  // namespace voxmask

#endif  // VOXMASK_FEATURES_HPP_
