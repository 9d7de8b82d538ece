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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "voxmask/voxmask.hpp"

namespace voxmask {
namespace {

constexpr double kPi = std::numbers::pi;

using testing::DominantFrequency;
using testing::Noise;
using testing::Tone;

std::vector<WarpSpec> ValidSpecs() {
  return {
      {WarpFamily::kSymmetric, 0.8},  {WarpFamily::kSymmetric, 1.4},
      {WarpFamily::kAsymmetric, 0.8}, {WarpFamily::kAsymmetric, 1.1},
      {WarpFamily::kQuadratic, -1.4}, {WarpFamily::kQuadratic, 1.4},
      {WarpFamily::kQuadratic, 3.0},  {WarpFamily::kPower, 0.6},
      {WarpFamily::kPower, 1.7},      {WarpFamily::kBilinear, -0.4},
      {WarpFamily::kBilinear, 0.4},   {WarpFamily::kBilinear, 0.9},
  };
}

TEST(WarpValue, HandValues) {
  EXPECT_NEAR(WarpValue({WarpFamily::kPower, 0.6}, kPi / 2), kPi * std::pow(0.5, 0.6), 1e-12);
  EXPECT_NEAR(WarpValue({WarpFamily::kPower, 0.6}, kPi / 2), 2.0727, 1e-4);
  EXPECT_NEAR(WarpValue({WarpFamily::kQuadratic, 1.4}, kPi / 2), kPi / 2 + 1.4 * 0.25, 1e-12);
  EXPECT_NEAR(WarpValue({WarpFamily::kQuadratic, 1.4}, kPi / 2), 1.9208, 1e-4);
  EXPECT_NEAR(WarpValue({WarpFamily::kBilinear, 0.4}, kPi / 2), std::atan2(0.84, -0.8), 1e-12);
  EXPECT_NEAR(WarpValue({WarpFamily::kBilinear, 0.4}, kPi / 2), 2.3318, 1e-4);
  EXPECT_NEAR(WarpValue({WarpFamily::kSymmetric, 1.4}, 1.0), 1.4, 1e-12);
  // Beyond the 0.625 pi breakpoint the line runs to (pi, pi).
  const double w0 = 0.625 * kPi;
  EXPECT_NEAR(WarpValue({WarpFamily::kSymmetric, 1.4}, w0), 1.4 * w0, 1e-12);
  EXPECT_NEAR(WarpValue({WarpFamily::kAsymmetric, 0.8}, 0.875 * kPi), 0.7 * kPi, 1e-12);
}

TEST(WarpValue, BilinearMatchesComplexAllPass) {
  for (double a : {-0.9, -0.4, -0.1, 0.1, 0.4, 0.9}) {
    for (int i = 1; i < 200; ++i) {
      const double w = kPi * i / 200.0;
      const std::complex<double> z = std::polar(1.0, w);
      const double expect = std::arg((z - a) / (1.0 - a * z));
      EXPECT_NEAR(WarpValue({WarpFamily::kBilinear, a}, w), expect, 1e-12);
    }
  }
}

TEST(WarpValue, IdentityParameters) {
  for (WarpFamily f : {WarpFamily::kSymmetric, WarpFamily::kAsymmetric, WarpFamily::kQuadratic,
                       WarpFamily::kPower, WarpFamily::kBilinear}) {
    const WarpSpec spec{f, IdentityAlpha(f)};
    for (int i = 0; i <= 1000; ++i) {
      const double w = kPi * i / 1000.0;
      EXPECT_NEAR(WarpValue(spec, w), w, 1e-12);
      EXPECT_NEAR(InvertWarp(spec, w), w, 1e-9);
    }
  }
}

TEST(WarpValue, EndpointsRangeAndMonotonicity) {
  auto specs = ValidSpecs();
  specs.push_back({WarpFamily::kAsymmetric, 1.3});  // clamped flat top
  for (const WarpSpec& s : specs) {
    EXPECT_EQ(WarpValue(s, 0.0), 0.0);
    EXPECT_EQ(WarpValue(s, kPi), kPi);
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double g = WarpValue(s, kPi * i / 1000.0);
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, kPi);
      if (g < kPi) {
        EXPECT_GT(g, prev) << WarpFamilyName(s.family) << " " << s.alpha;
      }
      EXPECT_GE(g, prev);
      prev = g;
    }
  }
}

TEST(WarpValue, RejectsInvalid) {
  const std::vector<WarpSpec> bad{
      {WarpFamily::kSymmetric, 0.0}, {WarpFamily::kAsymmetric, -1.0},
      {WarpFamily::kPower, 0.0},     {WarpFamily::kQuadratic, kPi},
      {WarpFamily::kQuadratic, -4},  {WarpFamily::kBilinear, 1.0},
      {WarpFamily::kBilinear, -1.2}, {WarpFamily::kBilinear, std::nan("")},
  };
  for (const WarpSpec& s : bad) {
    try {
      WarpValue(s, 1.0);
      FAIL() << WarpFamilyName(s.family) << " " << s.alpha;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidAlpha);
    }
  }
  EXPECT_THROW(WarpValue({WarpFamily::kPower, 1.2}, -0.1), Error);
  EXPECT_THROW(WarpValue({WarpFamily::kPower, 1.2}, 3.2), Error);
}

TEST(InvertWarp, InvertsOnGrid) {
  for (const WarpSpec& s : ValidSpecs()) {
    for (int i = 0; i <= 1000; ++i) {
      const double w = kPi * i / 1000.0;
      EXPECT_NEAR(InvertWarp(s, WarpValue(s, w)), w, 1e-9)
          << WarpFamilyName(s.family) << " " << s.alpha;
    }
  }
}

TEST(InvertWarp, BilinearInverseIsNegatedAlpha) {
  for (double a : {-0.7, -0.2, 0.3, 0.8}) {
    for (int i = 0; i <= 1000; ++i) {
      const double w = kPi * i / 1000.0;
      EXPECT_NEAR(InvertWarp({WarpFamily::kBilinear, a}, w),
                  WarpValue({WarpFamily::kBilinear, -a}, w), 1e-9);
      EXPECT_NEAR(WarpValue({WarpFamily::kBilinear, -a}, WarpValue({WarpFamily::kBilinear, a}, w)),
                  w, 1e-9);
    }
  }
}

TEST(InvertWarp, FlatTopIsNotInvertible) {
  const WarpSpec s{WarpFamily::kAsymmetric, 1.3};
  EXPECT_NEAR(WarpValue(s, 0.8 * kPi), kPi, 0.0);
  try {
    InvertWarp(s, kPi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotInvertible);
  }
  // Below the flat top the inverse still exists.
  EXPECT_NEAR(InvertWarp(s, 2.0), 2.0 / 1.3, 1e-12);
  EXPECT_THROW(WarpSpectrum(SpectralFrame{std::vector<std::complex<double>>(513, 1.0)}, s), Error);
}

TEST(WarpSpectrum, IdentityAndZero) {
  const Spectrogram s = Stft(Noise(4096, 3), StftConfig{});
  for (WarpFamily f : {WarpFamily::kPower, WarpFamily::kBilinear, WarpFamily::kQuadratic}) {
    for (WarpMapping m : {WarpMapping::kMoveToWarped, WarpMapping::kSampleAtWarped}) {
      const SpectralFrame out = WarpSpectrum(s.frames[3], {f, IdentityAlpha(f), m});
      for (std::size_t k = 0; k < out.size(); ++k) {
        EXPECT_NEAR(std::abs(out.bins[k] - s.frames[3].bins[k]), 0.0, 1e-9);
      }
    }
  }
  SpectralFrame zero;
  zero.bins.assign(513, 0.0);
  const SpectralFrame out = WarpSpectrum(zero, {WarpFamily::kBilinear, 0.3});
  for (const auto& v : out.bins) EXPECT_EQ(std::abs(v), 0.0);
  EXPECT_EQ(out.size(), zero.size());
}

std::size_t ArgMax(const SpectralFrame& f) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < f.size(); ++k) {
    if (std::abs(f.bins[k]) > std::abs(f.bins[best])) best = k;
  }
  return best;
}

TEST(WarpSpectrum, PeakMovesToWarpedPosition) {
  const std::size_t n = 513;
  for (const WarpSpec& s : ValidSpecs()) {
    for (std::size_t peak : {40u, 120u, 300u}) {
      SpectralFrame f;
      f.bins.assign(n, 0.01);
      f.bins[peak] = 1.0;
      f.bins[peak - 1] = f.bins[peak + 1] = 0.5;
      const double wp = kPi * static_cast<double>(peak) / (n - 1);
      const double moved = WarpValue(s, wp) / kPi * (n - 1);
      const std::size_t got = ArgMax(WarpSpectrum(f, s));
      EXPECT_NEAR(static_cast<double>(got), moved, 1.0)
          << WarpFamilyName(s.family) << " " << s.alpha << " peak " << peak;
    }
  }
}

TEST(WarpSpectrum, SampleAtWarpedMovesPeakToPreimage) {
  const std::size_t n = 513;
  const WarpSpec s{WarpFamily::kBilinear, 0.2, WarpMapping::kSampleAtWarped};
  SpectralFrame f;
  f.bins.assign(n, 0.01);
  f.bins[200] = 1.0;
  const double wp = kPi * 200.0 / (n - 1);
  const double moved = InvertWarp(s, wp) / kPi * (n - 1);
  EXPECT_LT(moved, 200.0);
  EXPECT_NEAR(static_cast<double>(ArgMax(WarpSpectrum(f, s))), moved, 1.0);
}

TEST(WarpSpectrum, InterpolatesMagnitudeAndUnwrappedPhase) {
  SpectralFrame f;
  f.bins = {std::polar(1.0, 3.0), std::polar(3.0, -3.0), std::polar(5.0, -2.9)};
  const std::vector<double> pos{0.5, 1.0, 1.5};
  const SpectralFrame out = ResampleSpectrum(f, pos);
  // -3.0 unwraps to 2 pi - 3 relative to 3.0, the midpoint phase is pi.
  EXPECT_NEAR(std::abs(out.bins[0]), 2.0, 1e-12);
  EXPECT_NEAR(std::abs(Princarg(std::arg(out.bins[0]) - kPi)), 0.0, 1e-12);
  EXPECT_EQ(out.bins[1], f.bins[1]);
  EXPECT_NEAR(std::abs(out.bins[2]), 4.0, 1e-12);
  EXPECT_NEAR(Princarg(std::arg(out.bins[2]) - (-2.95)), 0.0, 1e-12);
  EXPECT_THROW(ResampleSpectrum(f, std::vector<double>{0.0}), Error);
}

TEST(Vtln, IdentityIsTransparent) {
  const AudioBuffer in = testing::Vowel(160.0, 1.0);
  for (WarpFamily f : {WarpFamily::kSymmetric, WarpFamily::kQuadratic, WarpFamily::kBilinear}) {
    const AudioBuffer out = VtlnTransform(in, {f, IdentityAlpha(f)});
    ASSERT_EQ(out.size(), in.size());
    EXPECT_GE(SnrDb(in.samples, out.samples, 1024, in.size() - 1024), 40.0);
  }
}

TEST(Vtln, BilinearToneMovesToWarpedFrequency) {
  const WarpSpec spec{WarpFamily::kBilinear, -0.1};
  const double expect = WarpValue(spec, kPi * 1000.0 / 8000.0) * 8000.0 / kPi;
  EXPECT_LT(expect, 1000.0);
  const AudioBuffer out = VtlnTransform(Tone(1000.0, 3.0), spec);
  EXPECT_NEAR(DominantFrequency(out), expect, 16000.0 / 1024.0);
}

TEST(Vtln, ScheduleMappingLowersToneForPositiveAlpha) {
  const WarpSpec spec{WarpFamily::kBilinear, 0.1, WarpMapping::kSampleAtWarped};
  const double expect = InvertWarp(spec, kPi * 1000.0 / 8000.0) * 8000.0 / kPi;
  EXPECT_LT(expect, 1000.0);
  const AudioBuffer out = VtlnTransform(Tone(1000.0, 3.0), spec);
  EXPECT_NEAR(DominantFrequency(out), expect, 16000.0 / 1024.0);
}

TEST(Vtln, ExtremeQuadraticOnNoiseIsStable) {
  const AudioBuffer in = Noise(48000, 21);
  const AudioBuffer out = VtlnTransform(in, {WarpFamily::kQuadratic, 0.057 * 25});
  ASSERT_EQ(out.size(), in.size());
  for (double v : out.samples) ASSERT_TRUE(std::isfinite(v));
  const double ratio = Rms(out.samples) / Rms(in.samples);
  EXPECT_GT(ratio, 0.25);
  EXPECT_LT(ratio, 4.0);
}

TEST(Vtln, RejectsShortInput) {
  try {
    VtlnTransform(Noise(1000, 1), {WarpFamily::kPower, 1.1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooShort);
  }
}

}  // namespace
}  // namespace voxmask
