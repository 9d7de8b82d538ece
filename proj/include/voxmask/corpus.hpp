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

#ifndef VOXMASK_CORPUS_HPP_
#define VOXMASK_CORPUS_HPP_

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "voxmask/audio.hpp"
#include "voxmask/csv.hpp"
#include "voxmask/error.hpp"
#include "voxmask/speaker_id.hpp"
#include "voxmask/wav.hpp"

namespace voxmask {

enum class Partition { kTrain, kTest };

struct ManifestEntry {
  std::string path;
  std::string speaker_id;
  Gender gender;
  Partition partition;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  // Relative entry paths resolve against this directory.
  std::filesystem::path base_dir;

  std::filesystem::path Resolve(const ManifestEntry& e) const {
    const std::filesystem::path p(e.path);
    return p.is_absolute() ? p : base_dir / p;
  }
};

inline constexpr std::string_view kManifestHeader =
    "path,speaker_id,gender,partition";

// Speaker ids share the model-store label grammar and must not collide
// with the reserved gender-model labels, which start with '@'.
inline bool ValidSpeakerId(std::string_view id) {
  return !id.empty() && id.front() != '@' &&
         id.find_first_of(" \t,") == std::string_view::npos;
}

inline void ValidateManifest(const CorpusManifest& manifest) {
  if (manifest.entries.empty()) {
    throw Error(ErrorKind::kEmptyInput, "manifest has no entries");
  }
  std::set<std::string> paths;
  struct Counts {
    int train = 0;
    int test = 0;
    Gender gender;
  };
  std::map<std::string, Counts> speakers;
  for (const ManifestEntry& e : manifest.entries) {
    if (!paths.insert(e.path).second) {
      throw Error(ErrorKind::kInvariantViolation, "duplicate path " + e.path);
    }
    auto [it, inserted] = speakers.try_emplace(e.speaker_id, Counts{0, 0, e.gender});
    if (!inserted && it->second.gender != e.gender) {
      throw Error(ErrorKind::kInvariantViolation,
                  "speaker " + e.speaker_id + " has conflicting genders");
    }
    (e.partition == Partition::kTrain ? it->second.train : it->second.test)++;
  }
  for (const auto& [id, c] : speakers) {
    if (c.train == 0 || c.test == 0) {
      throw Error(ErrorKind::kInvariantViolation,
                  "speaker " + id + " has no " +
                      (c.train == 0 ? "train" : "test") + " entry");
    }
  }
}

inline CorpusManifest ParseManifest(const std::string& text,
                                    const std::filesystem::path& base_dir = {}) {
  CorpusManifest manifest;
  manifest.base_dir = base_dir;
  for (const csv::Line& line : csv::ParseTable(text, kManifestHeader)) {
    const auto& f = line.fields;
    if (f.size() != 4) {
      throw Error(ErrorKind::kParseError, "expected 4 fields", line.number);
    }
    if (f[0].empty()) {
      throw Error(ErrorKind::kParseError, "empty path", line.number);
    }
    if (!ValidSpeakerId(f[1])) {
      throw Error(ErrorKind::kParseError, "invalid speaker id '" + f[1] + "'",
                  line.number);
    }
    ManifestEntry e;
    e.path = f[0];
    e.speaker_id = f[1];
    if (f[2] == "M") {
      e.gender = Gender::kMale;
    } else if (f[2] == "F") {
      e.gender = Gender::kFemale;
    } else {
      throw Error(ErrorKind::kParseError, "gender must be M or F, got '" + f[2] + "'",
                  line.number);
    }
    if (f[3] == "train") {
      e.partition = Partition::kTrain;
    } else if (f[3] == "test") {
      e.partition = Partition::kTest;
    } else {
      throw Error(ErrorKind::kParseError,
                  "partition must be train or test, got '" + f[3] + "'",
                  line.number);
    }
    manifest.entries.push_back(std::move(e));
  }
  ValidateManifest(manifest);
  return manifest;
}

inline CorpusManifest LoadManifest(const std::filesystem::path& path) {
  return ParseManifest(csv::ReadFile(path), path.parent_path());
}

inline std::string FormatManifest(const CorpusManifest& manifest) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const ManifestEntry& e : manifest.entries) {
    out += fmt::format("{},{},{},{}\n", e.path, e.speaker_id, GenderCode(e.gender),
                       e.partition == Partition::kTrain ? "train" : "test");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpus.
//
// Each speaker is a source-filter voice: a glottal pulse train at a personal
// F0 with slow intonation, through four cascaded formant resonators. Every
// utterance reads the same vowel sequence; a speaker's formants are the
// shared vowel targets times a vocal-tract scale and per-formant offsets.

struct SynthOptions {
  int sample_rate = 16000;
  double seconds = 3.0;
};

namespace synth_internal {

// splitmix64, used to derive independent per-speaker and per-utterance
// streams from the corpus seed.
inline std::uint64_t Mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// mt19937_64 output is fully specified; the mapping to [0, 1) is done by
// hand because <random> distributions vary between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal() {
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr int kFormants = 4;
using Formants = std::array<double, kFormants>;

// Adult male reference targets (Hz).
constexpr std::array<Formants, 5> kVowels = {{
    {730, 1090, 2440, 3400},  // a
    {270, 2290, 3010, 3700},  // i
    {300, 870, 2240, 3300},   // u
    {530, 1840, 2480, 3500},  // e
    {570, 840, 2410, 3400},   // o
}};
constexpr std::array<int, 10> kVowelSequence = {0, 1, 3, 2, 4, 0, 3, 1, 4, 2};
constexpr Formants kBandwidths = {80, 100, 140, 180};

struct Voice {
  Gender gender;
  double f0;
  double tract_scale;
  Formants offsets;
  std::array<Formants, 5> vowel_offsets;  // per-vowel deviations of the speaker
  Formants bandwidth_scale;
  double tilt;
  std::array<double, 5> vowel_weight;  // habitual relative vowel durations
  double declination;                  // F0 fall across the utterance
  double vibrato_depth;
  double breath;                       // aspiration noise level
};

inline Voice DrawVoice(std::uint64_t seed, Gender gender) {
  Rng rng(seed);
  Voice v;
  v.gender = gender;
  const bool male = gender == Gender::kMale;
  v.f0 = male ? rng.Uniform(100.0, 140.0) : rng.Uniform(190.0, 240.0);
  v.tract_scale = male ? rng.Uniform(0.94, 1.04) : rng.Uniform(1.14, 1.24);
  for (int i = 0; i < kFormants; ++i) v.offsets[i] = rng.Uniform(0.85, 1.15);
  for (int i = 0; i < kFormants; ++i) v.bandwidth_scale[i] = rng.Uniform(0.6, 1.6);
  v.tilt = rng.Uniform(0.85, 0.97);
  for (Formants& vo : v.vowel_offsets) {
    for (double& o : vo) o = rng.Uniform(0.82, 1.18);
  }
  for (double& w : v.vowel_weight) w = rng.Uniform(0.4, 1.6);
  v.declination = rng.Uniform(0.05, 0.30);
  v.vibrato_depth = rng.Uniform(0.005, 0.03);
  v.breath = rng.Uniform(0.003, 0.05);
  return v;
}

inline std::vector<double> RenderUtterance(const Voice& voice, std::uint64_t seed,
                                           const SynthOptions& opt) {
  Rng rng(seed);
  const int fs = opt.sample_rate;
  const auto n = static_cast<std::size_t>(std::lround(opt.seconds * fs));
  const double f0_scale = rng.Uniform(0.97, 1.03);
  const double formant_jitter = rng.Uniform(0.99, 1.01);
  const double vibrato_rate = rng.Uniform(4.0, 6.0);

  // Segment boundaries: the speaker's habitual durations with +-20% jitter.
  const std::size_t segments = kVowelSequence.size();
  std::vector<double> ends(segments);
  double total = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    total += voice.vowel_weight[kVowelSequence[s]] * rng.Uniform(0.8, 1.2);
    ends[s] = total;
  }
  for (double& e : ends) e *= static_cast<double>(n) / total;

  auto target = [&](std::size_t seg, int f) {
    const int vowel = kVowelSequence[seg];
    return kVowels[vowel][f] * voice.tract_scale * voice.offsets[f] *
           voice.vowel_offsets[vowel][f] * formant_jitter;
  };

  std::vector<double> out(n, 0.0);
  std::array<double, kFormants> y1{};
  std::array<double, kFormants> y2{};
  double phase = 0.0;
  double glottal1 = 0.0;
  double glottal2 = 0.0;
  double prev = 0.0;
  const double transition = 0.04 * fs;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < segments && static_cast<double>(i) >= ends[seg]) ++seg;
    const double t = static_cast<double>(i) / fs;
    const double pos = static_cast<double>(i) / static_cast<double>(n);

    const double f0 =
        voice.f0 * f0_scale * (1.0 + voice.declination * (0.5 - pos)) *
        (1.0 + voice.vibrato_depth * std::sin(2.0 * std::numbers::pi * vibrato_rate * t));
    phase += f0 / fs;
    double excitation = 0.0;
    if (phase >= 1.0) {
      phase -= 1.0;
      excitation = 1.0 + 0.05 * rng.Normal();
    }
    // Two one-pole sections give the glottal spectral tilt.
    glottal1 = excitation + voice.tilt * glottal1;
    glottal2 = glottal1 + voice.tilt * glottal2;
    double x = glottal2 * (1.0 - voice.tilt) * (1.0 - voice.tilt) + voice.breath * rng.Normal();

    // Linear glide into each segment's targets.
    const double start = seg == 0 ? 0.0 : ends[seg - 1];
    const double blend =
        seg == 0 ? 1.0 : std::min(1.0, (static_cast<double>(i) - start) / transition);
    for (int f = 0; f < kFormants; ++f) {
      const double freq = seg == 0 ? target(0, f)
                                   : (1.0 - blend) * target(seg - 1, f) +
                                         blend * target(seg, f);
      const double bw = kBandwidths[f] * voice.bandwidth_scale[f];
      const double r = std::exp(-std::numbers::pi * bw / fs);
      const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / fs);
      const double a2 = -r * r;
      const double gain = 1.0 - a1 - a2;  // unity gain at DC
      const double y = gain * x + a1 * y1[f] + a2 * y2[f];
      y2[f] = y1[f];
      y1[f] = y;
      x = y;
    }
    // Lip radiation.
    out[i] = x - prev;
    prev = x;
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : out) v *= 0.5 / peak;
  }
  return out;
}

}  // namespace synth_internal

// Writes n_speakers * utterances WAV files plus manifest.csv into out_dir.
// Even-numbered speakers are male, odd-numbered female; utterance 0 of each
// speaker is the train partition. Identical arguments give identical bytes.
inline CorpusManifest SynthCorpus(std::uint64_t seed, int n_speakers,
                                  int utterances,
                                  const std::filesystem::path& out_dir,
                                  const SynthOptions& opt = {}) {
  using namespace synth_internal;
  if (n_speakers <= 0 || n_speakers % 2 != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "speaker count must be positive and even, got " +
                    std::to_string(n_speakers));
  }
  if (utterances < 2) {
    throw Error(ErrorKind::kInvalidArgument, "need at least 2 utterances per speaker");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIoFailure, "cannot create " + out_dir.string());
  }

  CorpusManifest manifest;
  manifest.base_dir = out_dir;
  for (int s = 0; s < n_speakers; ++s) {
    const Gender gender = s % 2 == 0 ? Gender::kMale : Gender::kFemale;
    const std::uint64_t speaker_seed = Mix(seed ^ Mix(static_cast<std::uint64_t>(s)));
    const Voice voice = DrawVoice(speaker_seed, gender);
    const std::string id = fmt::format("spk{:02d}", s);
    for (int u = 0; u < utterances; ++u) {
      AudioBuffer buf;
      buf.sample_rate = opt.sample_rate;
      buf.samples = RenderUtterance(
          voice, Mix(speaker_seed + 1 + static_cast<std::uint64_t>(u)), opt);
      const std::string file = fmt::format("{}_u{}.wav", id, u);
      WriteWav(out_dir / file, buf);
      manifest.entries.push_back(
          {file, id, gender, u == 0 ? Partition::kTrain : Partition::kTest});
    }
  }
  csv::WriteFile(out_dir / "manifest.csv", FormatManifest(manifest));
  return manifest;
}

}  // namespace voxmask

#endif  // VOXMASK_CORPUS_HPP_
