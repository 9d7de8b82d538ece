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

#ifndef VOXMASK_SPEAKER_ID_HPP_
#define VOXMASK_SPEAKER_ID_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voxmask/error.hpp"
#include "voxmask/features.hpp"

namespace voxmask {

enum class Gender { kMale, kFemale, kUnspecified };

inline char GenderCode(Gender g) {
  switch (g) {
    case Gender::kMale: return 'M';
    case Gender::kFemale: return 'F';
    case Gender::kUnspecified: return 'U';
  }
  return 'U';
}

inline std::optional<Gender> ParseGender(std::string_view s) {
  if (s == "M") return Gender::kMale;
  if (s == "F") return Gender::kFemale;
  if (s == "U") return Gender::kUnspecified;
  return std::nullopt;
}

struct SpeakerModel {
  std::string label;
  Gender gender = Gender::kUnspecified;
  Eigen::MatrixXd cov;
  std::size_t n_frames = 0;

  int order() const { return static_cast<int>(cov.rows()); }
  // Independent entries of the symmetric covariance, (P^2 + P) / 2.
  std::size_t parameter_count() const {
    const auto p = static_cast<std::size_t>(cov.rows());
    return (p * p + p) / 2;
  }
};

inline constexpr double kCovarianceRegularization = 1e-6;

// Sample covariance about the mean (divisor n - 1) plus
// 1e-6 * (trace / P) * I. A zero-trace covariance is regularized with the
// bare 1e-6 * I.
inline Eigen::MatrixXd CovarianceMatrix(
    const std::vector<const FeatureSequence*>& parts) {
  std::size_t n = 0;
  std::size_t dim = 0;
  for (const FeatureSequence* seq : parts) {
    for (const auto& v : seq->vectors) {
      if (n == 0) dim = v.size();
      if (v.size() != dim) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "feature vectors of differing dimension");
      }
      ++n;
    }
  }
  if (dim < 2 || n < dim + 1) {
    throw Error(ErrorKind::kTooFewFrames,
                "need at least P + 1 = " + std::to_string(dim + 1) +
                    " frames, got " + std::to_string(n));
  }
  const auto p = static_cast<Eigen::Index>(dim);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (const FeatureSequence* seq : parts) {
    for (const auto& v : seq->vectors) {
      mean += Eigen::Map<const Eigen::VectorXd>(v.data(), p);
    }
  }
  mean /= static_cast<double>(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  for (const FeatureSequence* seq : parts) {
    for (const auto& v : seq->vectors) {
      const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(v.data(), p) - mean;
      cov.selfadjointView<Eigen::Lower>().rankUpdate(d);
    }
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(n - 1);
  const double scale = cov.trace() / static_cast<double>(p);
  cov.diagonal().array() +=
      kCovarianceRegularization * (scale > 0.0 ? scale : 1.0);
  return cov;
}

inline SpeakerModel CovarianceModel(const FeatureSequence& feats,
                                    std::string label,
                                    Gender gender = Gender::kUnspecified) {
  SpeakerModel model;
  model.label = std::move(label);
  model.gender = gender;
  model.cov = CovarianceMatrix({&feats});
  model.n_frames = feats.size();
  return model;
}

namespace speaker_id_internal {

inline Eigen::LLT<Eigen::MatrixXd> Factor(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kNotPositiveDefinite,
                "covariance matrix is not positive definite");
  }
  return llt;
}

inline void CheckShapes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() ||
      a.rows() == 0) {
    throw Error(ErrorKind::kDimensionMismatch,
                "covariances of order " + std::to_string(a.rows()) + " and " +
                    std::to_string(b.rows()));
  }
}

}  // namespace speaker_id_internal

// Arithmetic-harmonic sphericity:
//   log(tr(A B^-1) * tr(B A^-1)) - 2 log P.
// Zero iff A is a positive multiple of B; lower means more similar.
inline double SphericityDistance(const Eigen::MatrixXd& test,
                                 const Eigen::MatrixXd& ref) {
  using namespace speaker_id_internal;
  CheckShapes(test, ref);
  const auto test_llt = Factor(test);
  const auto ref_llt = Factor(ref);
  const double a = ref_llt.solve(test).trace();
  const double b = test_llt.solve(ref).trace();
  const auto p = static_cast<double>(test.rows());
  return std::log(a * b) - 2.0 * std::log(p);
}

struct RankedSpeaker {
  std::string label;
  double score;
};

// Closed-set identification: ascending distance, ties by label.
inline std::vector<RankedSpeaker> IdentifySpeaker(
    const SpeakerModel& test, const std::vector<SpeakerModel>& enrolled) {
  if (enrolled.empty()) {
    throw Error(ErrorKind::kEmptyEnrollment, "no enrolled speakers");
  }
  std::vector<RankedSpeaker> ranked;
  ranked.reserve(enrolled.size());
  for (const SpeakerModel& m : enrolled) {
    ranked.push_back({m.label, SphericityDistance(test.cov, m.cov)});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedSpeaker& a, const RankedSpeaker& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.label < b.label;
            });
  return ranked;
}

struct GenderModels {
  SpeakerModel male;
  SpeakerModel female;
};

struct LabeledFeatures {
  FeatureSequence features;
  Gender gender;
};

// One pooled covariance model per gender.
inline GenderModels TrainGenderModels(const std::vector<LabeledFeatures>& corpus) {
  std::vector<const FeatureSequence*> male;
  std::vector<const FeatureSequence*> female;
  std::size_t male_frames = 0;
  std::size_t female_frames = 0;
  for (const LabeledFeatures& item : corpus) {
    if (item.gender == Gender::kMale) {
      male.push_back(&item.features);
      male_frames += item.features.size();
    } else if (item.gender == Gender::kFemale) {
      female.push_back(&item.features);
      female_frames += item.features.size();
    }
  }
  if (male.empty() || female.empty()) {
    throw Error(ErrorKind::kMissingGender,
                male.empty() ? "no male training data" : "no female training data");
  }
  GenderModels models;
  models.male = {"@M", Gender::kMale, CovarianceMatrix(male), male_frames};
  models.female = {"@F", Gender::kFemale, CovarianceMatrix(female), female_frames};
  return models;
}

struct GenderDecision {
  Gender gender;
  double margin;
};

// Exact ties resolve to male.
inline GenderDecision ClassifyGender(const SpeakerModel& test,
                                     const SpeakerModel& male,
                                     const SpeakerModel& female) {
  const double to_male = SphericityDistance(test.cov, male.cov);
  const double to_female = SphericityDistance(test.cov, female.cov);
  return {to_female < to_male ? Gender::kFemale : Gender::kMale,
          std::abs(to_male - to_female)};
}

}  // namespace voxmask

#endif  // VOXMASK_SPEAKER_ID_HPP_
