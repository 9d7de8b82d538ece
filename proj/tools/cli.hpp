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

#ifndef VOXMASK_TOOLS_CLI_HPP_
#define VOXMASK_TOOLS_CLI_HPP_

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "voxmask/voxmask.hpp"

namespace voxmask::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Flag misuse detected after CLI11 has accepted the syntax.
struct UsageError {
  std::string message;
};

namespace detail {

inline std::optional<WarpFamily> ParseWarpFamily(const std::string& s) {
  for (WarpFamily f : {WarpFamily::kSymmetric, WarpFamily::kAsymmetric,
                       WarpFamily::kQuadratic, WarpFamily::kPower,
                       WarpFamily::kBilinear}) {
    if (WarpFamilyName(f) == s) return f;
  }
  return std::nullopt;
}

// "a..b" or a single integer.
inline std::vector<int> ParseDegreeRange(const std::string& s) {
  const auto dots = s.find("..");
  const std::string lo_s = dots == std::string::npos ? s : s.substr(0, dots);
  const std::string hi_s = dots == std::string::npos ? s : s.substr(dots + 2);
  const auto lo = csv::ParseNumber<int>(lo_s);
  const auto hi = csv::ParseNumber<int>(hi_s);
  if (!lo || !hi || *lo > *hi || *lo < 0 || *hi > kMaxDegree) {
    throw UsageError{"--degrees expects a..b with 0 <= a <= b <= 25, got '" + s + "'"};
  }
  std::vector<int> out;
  for (int d = *lo; d <= *hi; ++d) out.push_back(d);
  return out;
}

inline std::vector<Algorithm> ParseAlgorithmList(const std::string& s) {
  std::vector<Algorithm> out;
  for (const std::string& name : csv::SplitFields(s)) {
    const auto a = ParseAlgorithm(name);
    if (!a) throw UsageError{"unknown algorithm '" + name + "' in --algos"};
    out.push_back(*a);
  }
  return out;
}

inline SpeakerModel TestModel(const std::string& wav_path) {
  return CovarianceModel(ExtractCepstra(ReadWav(wav_path)), wav_path);
}

inline std::string FormatCrossover(const Curve& curve) {
  try {
    return fmt::format("{:.1f}", FindCrossover(curve));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoCrossover) throw;
    return "-";
  }
}

struct TransformArgs {
  std::string algo;
  std::optional<int> degree;
  std::optional<double> ratio;
  std::optional<double> alpha;
  std::string gender;
  std::string in;
  std::string out;
};

// Resolves the transform flags; every rejection here is a usage error.
inline TransformSpec ResolveTransform(const TransformArgs& a) {
  const int given = a.degree.has_value() + a.ratio.has_value() + a.alpha.has_value();
  if (given != 1) throw UsageError{"exactly one of --degree, --ratio, --alpha is required"};
  std::optional<Gender> gender;
  if (!a.gender.empty()) {
    gender = ParseGender(a.gender);
    if (!gender || *gender == Gender::kUnspecified) {
      throw UsageError{"--gender must be M or F"};
    }
  }
  const auto algo = ParseAlgorithm(a.algo);
  const auto family = ParseWarpFamily(a.algo);
  const bool pitch = algo == Algorithm::kVoc || algo == Algorithm::kVocf;
  if (!pitch && !family) throw UsageError{"unknown --algo '" + a.algo + "'"};

  if (a.ratio) {
    if (!pitch) throw UsageError{"--ratio applies only to voc and vocf"};
    PitchShiftSpec spec{*a.ratio};
    try {
      ValidatePitchShiftSpec(spec);
    } catch (const Error& e) {
      throw UsageError{e.what()};
    }
    return spec;
  }
  if (a.alpha) {
    if (pitch) throw UsageError{"--alpha applies only to warping algorithms"};
    WarpSpec spec{*family, *a.alpha, WarpMapping::kSampleAtWarped};
    try {
      ValidateWarpSpec(spec);
    } catch (const Error& e) {
      throw UsageError{e.what()};
    }
    return spec;
  }
  if (!algo) {
    throw UsageError{"--degree has no schedule for '" + a.algo +
                     "'; use --alpha"};
  }
  if (*a.degree < 0 || *a.degree > kMaxDegree) {
    throw UsageError{"--degree must lie in 0..25"};
  }
  if (!pitch && !gender) throw UsageError{"--gender is required with --degree for " + a.algo};
  return ScheduleTransform(*algo, *a.degree, gender.value_or(Gender::kUnspecified));
}

inline const SpeakerModel* FindModel(const std::vector<SpeakerModel>& models,
                                     const std::string& label) {
  for (const SpeakerModel& m : models) {
    if (m.label == label) return &m;
  }
  return nullptr;
}

}  // namespace detail

// Runs one invocation. `args` excludes the program name. Results go to
// `out`, diagnostics to `err`. Returns 0 on success, 1 on runtime errors and
// 2 on usage errors.
inline int RunCli(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  CLI::App app{"Voice de-identification toolkit", "voxmask"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  detail::TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Apply one voice transform to a WAV file");
  transform->add_option("--algo", ta.algo,
                        "voc|vocf|symmetric|asymmetric|quadratic|power|bilinear")
      ->required();
  transform->add_option("--degree", ta.degree, "Modification degree 0..25");
  transform->add_option("--ratio", ta.ratio, "Raw pitch ratio (voc, vocf)");
  transform->add_option("--alpha", ta.alpha, "Raw warping parameter");
  transform->add_option("--gender", ta.gender, "M or F; selects the warp schedule");
  transform->add_option("--in", ta.in, "Input WAV")->required();
  transform->add_option("--out", ta.out, "Output WAV")->required();

  std::string manifest_path;
  std::string models_path;
  auto* enroll = app.add_subcommand("enroll", "Build speaker and gender models");
  enroll->add_option("--manifest", manifest_path, "Corpus manifest CSV")->required();
  enroll->add_option("--models", models_path, "Model store to write")->required();

  std::string in_path;
  auto* identify = app.add_subcommand("identify", "Rank enrolled speakers for a WAV file");
  identify->add_option("--models", models_path, "Model store")->required();
  identify->add_option("--in", in_path, "Input WAV")->required();

  auto* gender = app.add_subcommand("gender", "Classify the gender of a WAV file");
  gender->add_option("--models", models_path, "Model store")->required();
  gender->add_option("--in", in_path, "Input WAV")->required();

  std::string algos = "voc,vocf,quadratic,bilinear";
  std::string degrees = "0..25";
  std::string out_dir;
  unsigned threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Run the degree sweep and write reports");
  sweep->add_option("--manifest", manifest_path, "Corpus manifest CSV")->required();
  sweep->add_option("--algos", algos, "Comma-separated algorithms")
      ->capture_default_str();
  sweep->add_option("--degrees", degrees, "Degree range a..b")->capture_default_str();
  sweep->add_option("--out", out_dir, "Report directory")->required();
  sweep->add_option("--threads", threads, "Worker threads, 0 for all cores");

  std::uint64_t seed = 0;
  int speakers = 0;
  int utts = 0;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus");
  synth->add_option("--seed", seed, "Generator seed")->required();
  synth->add_option("--speakers", speakers, "Speaker count (even)")->required();
  synth->add_option("--utts", utts, "Utterances per speaker")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();

  std::string ratings_path;
  auto* mos = app.add_subcommand("mos", "Aggregate listener ratings");
  mos->add_option("--ratings", ratings_path, "Ratings CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (*transform) {
      const TransformSpec spec = detail::ResolveTransform(ta);
      WriteWav(ta.out, ApplyTransform(ReadWav(ta.in), spec));
    } else if (*enroll) {
      const Enrollment e = Enroll(LoadManifest(manifest_path));
      std::vector<SpeakerModel> models = e.speakers;
      models.push_back(e.genders.male);
      models.push_back(e.genders.female);
      WriteModelStore(models_path, models);
      err << fmt::format("enrolled {} speakers, {} models\n", e.speakers.size(),
                         models.size());
    } else if (*identify) {
      std::vector<SpeakerModel> enrolled;
      for (SpeakerModel& m : ReadModelStore(models_path)) {
        if (!m.label.starts_with('@')) enrolled.push_back(std::move(m));
      }
      for (const RankedSpeaker& r : IdentifySpeaker(detail::TestModel(in_path), enrolled)) {
        out << fmt::format("{} {:.6f}\n", r.label, r.score);
      }
    } else if (*gender) {
      const std::vector<SpeakerModel> models = ReadModelStore(models_path);
      const SpeakerModel* male = detail::FindModel(models, "@M");
      const SpeakerModel* female = detail::FindModel(models, "@F");
      if (!male || !female) {
        throw Error(ErrorKind::kMissingGender, "model store lacks the @M or @F model");
      }
      const GenderDecision d = ClassifyGender(detail::TestModel(in_path), *male, *female);
      out << fmt::format("{} {:.6f}\n", GenderCode(d.gender), d.margin);
    } else if (*sweep) {
      SweepOptions opt;
      opt.algorithms = detail::ParseAlgorithmList(algos);
      opt.degrees = detail::ParseDegreeRange(degrees);
      opt.threads = threads;
      opt.log = [&err](const std::string& line) { err << "skipped " << line << "\n"; };
      const auto start = std::chrono::steady_clock::now();
      const CorpusManifest manifest = LoadManifest(manifest_path);
      const Enrollment enrollment = Enroll(manifest, opt.features);
      const SweepResult result = RunDegreeSweep(manifest, enrollment, opt);
      EmitReport(result, out_dir);
      std::vector<Algorithm> done = opt.algorithms;
      std::sort(done.begin(), done.end());
      done.erase(std::unique(done.begin(), done.end()), done.end());
      for (Algorithm a : done) {
        const std::string name(AlgorithmName(a));
        for (Gender g : {Gender::kMale, Gender::kFemale}) {
          const Curve c = ExtractCurve(result, a, Metric::kGenderSuccess, g);
          out << fmt::format("{} {} {}\n", name, GenderCode(g),
                             c.empty() ? "-" : detail::FormatCrossover(c));
        }
        const Curve id = ExtractCurve(result, a, Metric::kIdentification);
        out << fmt::format("{} id {}\n", name,
                           id.empty() ? "-" : detail::FormatCrossover(id));
      }
      err << fmt::format(
          "sweep took {:.1f} s\n",
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    } else if (*synth) {
      if (speakers <= 0 || speakers % 2 != 0) {
        throw UsageError{"--speakers must be positive and even"};
      }
      if (utts < 2) throw UsageError{"--utts must be at least 2"};
      const CorpusManifest m = SynthCorpus(seed, speakers, utts, out_dir);
      err << fmt::format("wrote {} files to {}\n", m.entries.size(), out_dir);
    } else if (*mos) {
      out << FormatMos(LoadMos(ratings_path));
    }
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    err << app.get_subcommands().front()->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace voxmask::cli

#endif  // VOXMASK_TOOLS_CLI_HPP_
