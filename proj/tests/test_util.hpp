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

#ifndef VOXMASK_TESTS_TEST_UTIL_HPP_
#define VOXMASK_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "voxmask/voxmask.hpp"

namespace voxmask::testing {

inline AudioBuffer Tone(double hz, double seconds, int rate = 16000,
                        double amp = 0.5) {
  AudioBuffer b;
  b.sample_rate = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  b.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  }
  return b;
}

inline AudioBuffer Noise(std::size_t n, unsigned seed, double amp = 0.3) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, amp);
  AudioBuffer b;
  b.samples.resize(n);
  for (double& v : b.samples) v = dist(gen);
  return b;
}

// Harmonic series at f0 shaped by two resonances, a rough vowel.
inline AudioBuffer Vowel(double f0, double seconds, int rate = 16000) {
  AudioBuffer b;
  b.sample_rate = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  b.samples.assign(n, 0.0);
  for (int h = 1; f0 * h < 0.45 * rate; ++h) {
    const double f = f0 * h;
    const double env = 1.0 / (1.0 + std::pow((f - 700.0) / 150.0, 2)) +
                       0.5 / (1.0 + std::pow((f - 1200.0) / 200.0, 2)) + 0.01;
    for (std::size_t i = 0; i < n; ++i) {
      b.samples[i] += 0.1 * env * std::sin(2.0 * std::numbers::pi * f * i / rate + h);
    }
  }
  return b;
}

// Frequency of the largest magnitude in a Hann-windowed, 4x zero-padded FFT
// of the interior (edges of `trim` samples dropped), refined by parabolic
// interpolation on log magnitudes.
inline double DominantFrequency(const AudioBuffer& b, std::size_t trim = 2048) {
  const std::size_t len = b.size() - 2 * trim;
  std::size_t n = 1;
  while (n < 4 * len) n <<= 1;
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / len);
    x[i] = b.samples[trim + i] * w;
  }
  const RealFft fft(n);
  const auto spec = fft.Forward(x);
  std::size_t best = 1;
  for (std::size_t k = 1; k + 1 < spec.size(); ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  const double a = std::log(std::abs(spec[best - 1]) + 1e-300);
  const double c = std::log(std::abs(spec[best]) + 1e-300);
  const double d = std::log(std::abs(spec[best + 1]) + 1e-300);
  const double denom = a - 2 * c + d;
  const double offset = denom != 0.0 ? 0.5 * (a - d) / denom : 0.0;
  return (static_cast<double>(best) + offset) * b.sample_rate / static_cast<double>(n);
}

// Mean over frames of the RMS dB difference between magnitude spectra, with
// both spectra floored 60 dB below the reference's peak.
// max_bin limits the comparison to bins below it (0 means every bin).
inline double LogSpectralDistortion(const AudioBuffer& ref, const AudioBuffer& test,
                                    std::size_t max_bin = 0) {
  const StftConfig cfg;
  const Spectrogram a = Stft(ref, cfg);
  const Spectrogram b = Stft(test, cfg);
  double peak = 0.0;
  for (const auto& f : a.frames) {
    for (const auto& v : f.bins) peak = std::max(peak, std::abs(v));
  }
  const double floor = peak * 1e-3;
  double total = 0.0;
  std::size_t frames = 0;
  // Skip the edge frames, where zero padding differs.
  for (std::size_t t = 4; t + 4 < a.frames.size() && t < b.frames.size(); ++t) {
    const std::size_t bins =
        max_bin == 0 ? a.frames[t].size() : std::min(max_bin, a.frames[t].size());
    double acc = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double ma = std::max(std::abs(a.frames[t].bins[k]), floor);
      const double mb = std::max(std::abs(b.frames[t].bins[k]), floor);
      const double db = 20.0 * std::log10(ma / mb);
      acc += db * db;
    }
    total += std::sqrt(acc / static_cast<double>(bins));
    ++frames;
  }
  return total / static_cast<double>(frames);
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("voxmask_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string Slurp(const std::filesystem::path& p) { return csv::ReadFile(p); }

}  // namespace voxmask::testing

#endif  // VOXMASK_TESTS_TEST_UTIL_HPP_
