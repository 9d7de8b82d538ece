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

#ifndef VOXMASK_SWEEP_HPP_
#define VOXMASK_SWEEP_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "voxmask/corpus.hpp"
#include "voxmask/error.hpp"
#include "voxmask/features.hpp"
#include "voxmask/schedule.hpp"
#include "voxmask/speaker_id.hpp"
#include "voxmask/stft.hpp"
#include "voxmask/wav.hpp"

namespace voxmask {

struct SweepRow {
  Algorithm algorithm;
  Gender gender;
  int degree;
  double gender_success_rate;
  double identification_rate;
  std::size_t n_files;

  bool operator==(const SweepRow&) const = default;
};

// Rows ordered by (algorithm, gender M before F, degree).
struct SweepResult {
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
};

struct SweepOptions {
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms),
                                    std::end(kAllAlgorithms)};
  std::vector<int> degrees;  // empty selects 0..25
  StftConfig stft;
  FeatureConfig features;
  PhaseVariant phase_variant = PhaseVariant::kIdentityLocked;
  unsigned threads = 0;  // 0 selects hardware concurrency
  // Receives one line per skipped file; may be called from worker threads
  // but never concurrently.
  std::function<void(const std::string&)> log;
};

struct Enrollment {
  std::vector<SpeakerModel> speakers;  // sorted by label
  GenderModels genders;
};

// Speaker models from each speaker's pooled train files plus the two pooled
// gender models, all on unmodified audio.
inline Enrollment Enroll(const CorpusManifest& manifest,
                         const FeatureConfig& cfg = {}) {
  std::map<std::string, std::vector<FeatureSequence>> by_speaker;
  std::map<std::string, Gender> genders;
  std::vector<LabeledFeatures> labeled;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.partition != Partition::kTrain) continue;
    FeatureSequence feats = ExtractCepstra(ReadWav(manifest.Resolve(e)), cfg);
    labeled.push_back({feats, e.gender});
    by_speaker[e.speaker_id].push_back(std::move(feats));
    genders[e.speaker_id] = e.gender;
  }
  Enrollment out;
  for (const auto& [id, seqs] : by_speaker) {
    std::vector<const FeatureSequence*> parts;
    std::size_t frames = 0;
    for (const auto& s : seqs) {
      parts.push_back(&s);
      frames += s.size();
    }
    out.speakers.push_back({id, genders[id], CovarianceMatrix(parts), frames});
  }
  out.genders = TrainGenderModels(labeled);
  return out;
}

namespace sweep_internal {

struct Outcome {
  bool ok = false;
  bool gender_correct = false;
  bool identified = false;
};

template <typename Fn>
void ParallelFor(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sweep_internal

// Transforms every test file at every (algorithm, degree), then scores the
// result against the enrollment: gender decision vs. ground truth and top-1
// speaker identity. Per-file failures are logged and left out of n_files.
// Counts are reduced by key, so the result does not depend on file order
// or thread scheduling.
inline SweepResult RunDegreeSweep(const CorpusManifest& manifest,
                                  const Enrollment& enrollment,
                                  const SweepOptions& opt = {}) {
  using sweep_internal::Outcome;
  std::vector<int> degrees = opt.degrees;
  if (degrees.empty()) {
    for (int d = 0; d <= kMaxDegree; ++d) degrees.push_back(d);
  }
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  for (int d : degrees) ValidateDegree(d);
  std::vector<Algorithm> algorithms = opt.algorithms;
  std::sort(algorithms.begin(), algorithms.end());
  algorithms.erase(std::unique(algorithms.begin(), algorithms.end()),
                   algorithms.end());
  if (algorithms.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no algorithms selected");
  }

  std::vector<const ManifestEntry*> tests;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.partition == Partition::kTest) tests.push_back(&e);
  }

  const std::size_t per_item = degrees.size();
  const std::size_t items = tests.size() * algorithms.size();
  std::vector<Outcome> outcomes(items * per_item);
  std::mutex log_mu;
  auto log = [&](const std::string& line) {
    if (!opt.log) return;
    std::lock_guard<std::mutex> lock(log_mu);
    opt.log(line);
  };

  sweep_internal::ParallelFor(items, opt.threads, [&](std::size_t item) {
    const ManifestEntry& entry = *tests[item / algorithms.size()];
    const Algorithm algo = algorithms[item % algorithms.size()];
    AudioBuffer input;
    try {
      input = ReadWav(manifest.Resolve(entry));
    } catch (const Error& e) {
      log(entry.path + ": " + e.what());
      return;
    }
    for (std::size_t di = 0; di < per_item; ++di) {
      Outcome& out = outcomes[item * per_item + di];
      try {
        const TransformSpec spec = ScheduleTransform(algo, degrees[di], entry.gender,
                                                     opt.phase_variant);
        const AudioBuffer modified = ApplyTransform(input, spec, opt.stft);
        const SpeakerModel test =
            CovarianceModel(ExtractCepstra(modified, opt.features), entry.path);
        const GenderDecision g =
            ClassifyGender(test, enrollment.genders.male, enrollment.genders.female);
        const auto ranked = IdentifySpeaker(test, enrollment.speakers);
        out.ok = true;
        out.gender_correct = g.gender == entry.gender;
        out.identified = ranked.front().label == entry.speaker_id;
      } catch (const Error& e) {
        log(entry.path + " [" + std::string(AlgorithmName(algo)) + " degree " +
            std::to_string(degrees[di]) + "]: " + e.what());
      }
    }
  });

  struct Tally {
    std::size_t n = 0;
    std::size_t gender = 0;
    std::size_t identity = 0;
  };
  std::map<std::tuple<Algorithm, int, int>, Tally> tallies;
  for (std::size_t item = 0; item < items; ++item) {
    const ManifestEntry& entry = *tests[item / algorithms.size()];
    const Algorithm algo = algorithms[item % algorithms.size()];
    const int g = entry.gender == Gender::kMale ? 0 : 1;
    for (std::size_t di = 0; di < per_item; ++di) {
      const Outcome& o = outcomes[item * per_item + di];
      if (!o.ok) continue;
      Tally& t = tallies[{algo, g, degrees[di]}];
      ++t.n;
      t.gender += o.gender_correct;
      t.identity += o.identified;
    }
  }

  SweepResult result;
  for (const auto& [key, t] : tallies) {
    const auto [algo, g, degree] = key;
    result.rows.push_back({algo, g == 0 ? Gender::kMale : Gender::kFemale, degree,
                           static_cast<double>(t.gender) / static_cast<double>(t.n),
                           static_cast<double>(t.identity) / static_cast<double>(t.n),
                           t.n});
  }
  return result;
}

inline SweepResult RunDegreeSweep(const CorpusManifest& manifest,
                                  const SweepOptions& opt = {}) {
  return RunDegreeSweep(manifest, Enroll(manifest, opt.features), opt);
}

// ---------------------------------------------------------------------------
// Curves and crossovers.

struct CurvePoint {
  double degree;
  double rate;
};
using Curve = std::vector<CurvePoint>;

enum class Metric { kGenderSuccess, kIdentification };

// Rate against degree for one algorithm. With `gender` unspecified, both
// genders are pooled weighting each row by its file count.
inline Curve ExtractCurve(const SweepResult& result, Algorithm algo, Metric metric,
                          Gender gender = Gender::kUnspecified) {
  std::map<int, std::pair<double, double>> acc;  // degree -> (weighted sum, n)
  for (const SweepRow& r : result.rows) {
    if (r.algorithm != algo) continue;
    if (gender != Gender::kUnspecified && r.gender != gender) continue;
    const double rate = metric == Metric::kGenderSuccess ? r.gender_success_rate
                                                         : r.identification_rate;
    auto& [sum, n] = acc[r.degree];
    sum += rate * static_cast<double>(r.n_files);
    n += static_cast<double>(r.n_files);
  }
  Curve curve;
  for (const auto& [degree, sn] : acc) {
    curve.push_back({static_cast<double>(degree), sn.first / sn.second});
  }
  return curve;
}

// First degree at which the curve falls to `level`, linearly interpolated
// between samples. A curve starting at or below the level crosses at its
// first degree.
inline double FindCrossover(const Curve& curve, double level = 0.5) {
  if (curve.empty()) throw Error(ErrorKind::kInvalidArgument, "empty curve");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].degree > curve[i - 1].degree)) {
      throw Error(ErrorKind::kInvalidArgument, "degrees must strictly increase");
    }
  }
  if (curve.front().rate <= level) return curve.front().degree;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const CurvePoint& a = curve[i - 1];
    const CurvePoint& b = curve[i];
    if (a.rate > level && b.rate <= level) {
      return a.degree + (b.degree - a.degree) * (a.rate - level) / (a.rate - b.rate);
    }
  }
  throw Error(ErrorKind::kNoCrossover, "curve never reaches the level");
}

// Spearman rank correlation with average ranks for ties. NaN when either
// input is constant.
inline double SpearmanCorrelation(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "need two equal-length samples");
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace voxmask

#endif  // VOXMASK_SWEEP_HPP_
