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

#ifndef VOXMASK_SCHEDULE_HPP_
#define VOXMASK_SCHEDULE_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "voxmask/audio.hpp"
#include "voxmask/error.hpp"
#include "voxmask/phase_vocoder.hpp"
#include "voxmask/speaker_id.hpp"
#include "voxmask/stft.hpp"
#include "voxmask/vtln.hpp"

namespace voxmask {

// The four de-identification algorithms swept by degree.
//  voc / vocf:         pitch raised / lowered by the phase vocoder.
//  quadratic/bilinear: spectral warping with gender-dependent direction.
enum class Algorithm { kVoc, kVocf, kQuadratic, kBilinear };

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::kVoc, Algorithm::kVocf, Algorithm::kQuadratic,
    Algorithm::kBilinear};

inline constexpr int kMaxDegree = 25;

// Per-degree warp steps: females warp upward, males downward.
inline constexpr double kQuadraticStepFemale = 0.057;
inline constexpr double kQuadraticStepMale = -0.029;
inline constexpr double kBilinearStepFemale = 0.0065;
inline constexpr double kBilinearStepMale = -0.0043;

// One degree is half a semitone of pitch.
inline constexpr double kDegreesPerOctave = 24.0;

inline std::string_view AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kVoc: return "voc";
    case Algorithm::kVocf: return "vocf";
    case Algorithm::kQuadratic: return "quadratic";
    case Algorithm::kBilinear: return "bilinear";
  }
  return "unknown";
}

inline std::optional<Algorithm> ParseAlgorithm(std::string_view s) {
  for (Algorithm a : kAllAlgorithms) {
    if (AlgorithmName(a) == s) return a;
  }
  return std::nullopt;
}

using TransformSpec = std::variant<PitchShiftSpec, WarpSpec>;

inline void ValidateDegree(int degree) {
  if (degree < 0 || degree > kMaxDegree) {
    throw Error(ErrorKind::kInvalidArgument,
                "degree must lie in [0, 25], got " + std::to_string(degree));
  }
}

inline double PitchRatioForDegree(Algorithm a, int degree) {
  ValidateDegree(degree);
  const double sign = a == Algorithm::kVocf ? -1.0 : 1.0;
  return std::exp2(sign * degree / kDegreesPerOctave);
}

inline double WarpAlphaForDegree(Algorithm a, int degree, Gender gender) {
  ValidateDegree(degree);
  if (gender == Gender::kUnspecified) {
    throw Error(ErrorKind::kInvalidArgument,
                "warping schedules depend on gender; M or F required");
  }
  const bool female = gender == Gender::kFemale;
  if (a == Algorithm::kQuadratic) {
    return degree * (female ? kQuadraticStepFemale : kQuadraticStepMale);
  }
  return degree * (female ? kBilinearStepFemale : kBilinearStepMale);
}

// Resolves (algorithm, degree, gender) to concrete transform parameters.
// Gender is ignored by the pitch algorithms.
inline TransformSpec ScheduleTransform(
    Algorithm a, int degree, Gender gender,
    PhaseVariant variant = PhaseVariant::kIdentityLocked) {
  switch (a) {
    case Algorithm::kVoc:
    case Algorithm::kVocf:
      return PitchShiftSpec{PitchRatioForDegree(a, degree), variant, 2};
    case Algorithm::kQuadratic:
      return WarpSpec{WarpFamily::kQuadratic, WarpAlphaForDegree(a, degree, gender),
                      WarpMapping::kSampleAtWarped};
    case Algorithm::kBilinear:
      return WarpSpec{WarpFamily::kBilinear, WarpAlphaForDegree(a, degree, gender),
                      WarpMapping::kSampleAtWarped};
  }
  return PitchShiftSpec{};
}

inline AudioBuffer ApplyTransform(const AudioBuffer& buf,
                                  const TransformSpec& spec,
                                  const StftConfig& cfg = {}) {
  if (const auto* pitch = std::get_if<PitchShiftSpec>(&spec)) {
    return PitchShift(buf, *pitch, cfg);
  }
  return VtlnTransform(buf, std::get<WarpSpec>(spec), cfg);
}

}  // namespace voxmask

#endif  // VOXMASK_SCHEDULE_HPP_
