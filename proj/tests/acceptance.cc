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

// Acceptance checks AC1..AC7. Prints one PASS/FAIL line per criterion, with
// indented detail lines, and exits non-zero if any criterion fails.

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "voxmask/voxmask.hpp"

namespace voxmask {
namespace {

constexpr double kPi = std::numbers::pi;

// Seed of the AC5 synthetic corpus.
constexpr std::uint64_t kCorpusSeed = 7;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      ok_ = false;
      fmt::print("  {} FAIL: {}\n", name_, what);
    }
  }
  void Note(const std::string& what) { fmt::print("  {} {}\n", name_, what); }

  bool Finish(double seconds, double budget) {
    Check(seconds < budget, fmt::format("runtime {:.1f} s exceeds {:.0f} s", seconds, budget));
    fmt::print("{} {} ({:.1f} s)\n", name_, ok_ ? "PASS" : "FAIL", seconds);
    std::fflush(stdout);
    return ok_;
  }

 private:
  std::string name_;
  bool ok_ = true;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool Ac1() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC1");
  struct Grid {
    WarpFamily family;
    double lo, hi;
  };
  const Grid grids[] = {{WarpFamily::kSymmetric, 0.5, 1.6}, {WarpFamily::kAsymmetric, 0.5, 1.6},
                        {WarpFamily::kQuadratic, -3.1, 3.1}, {WarpFamily::kPower, 0.3, 3.0},
                        {WarpFamily::kBilinear, -0.95, 0.95}};
  int specs = 0;
  for (const Grid& g : grids) {
    std::vector<double> alphas;
    for (int i = 0; i <= 20; ++i) alphas.push_back(g.lo + (g.hi - g.lo) * i / 20.0);
    alphas.push_back(IdentityAlpha(g.family));
    for (double a : alphas) {
      const WarpSpec s{g.family, a};
      const std::string tag = fmt::format("{} alpha {}", WarpFamilyName(g.family), a);
      ++specs;
      c.Check(WarpValue(s, 0.0) == 0.0 && WarpValue(s, kPi) == kPi, tag + " endpoints");
      double prev = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double w = kPi * i / 999.0;
        const double v = WarpValue(s, w);
        if (v < 0.0 || v > kPi) c.Check(false, tag + " out of range");
        if (i > 0 && (v < prev || (v < kPi && v <= prev))) {
          c.Check(false, fmt::format("{} not monotone at omega {}", tag, w));
          break;
        }
        if (a == IdentityAlpha(g.family) && std::abs(v - w) > 1e-9) {
          c.Check(false, tag + " identity fails");
          break;
        }
        prev = v;
      }
    }
  }
  // Hand values, compared with closed forms evaluated independently.
  c.Check(std::abs(WarpValue({WarpFamily::kPower, 0.6}, kPi / 2) - kPi * std::pow(0.5, 0.6)) < 1e-6,
          "power 0.6");
  c.Check(std::abs(kPi * std::pow(0.5, 0.6) - 2.0727) < 5e-5, "power 0.6 printed value");
  c.Check(std::abs(WarpValue({WarpFamily::kQuadratic, 1.4}, kPi / 2) - (kPi / 2 + 0.35)) < 1e-6,
          "quadratic 1.4");
  c.Check(std::abs(kPi / 2 + 0.35 - 1.9208) < 5e-5, "quadratic 1.4 printed value");
  const std::complex<double> z(0.0, 1.0);
  const double bil = std::arg((z - 0.4) / (1.0 - 0.4 * z));
  c.Check(std::abs(WarpValue({WarpFamily::kBilinear, 0.4}, kPi / 2) - bil) < 1e-6, "bilinear 0.4");
  c.Check(std::abs(bil - 2.3318) < 5e-5, "bilinear 0.4 printed value");
  c.Check(std::abs(WarpValue({WarpFamily::kSymmetric, 1.4}, 1.0) - 1.4) < 1e-6, "symmetric 1.4");
  c.Note(fmt::format("{} specs x 1000 points", specs));
  return c.Finish(Seconds(start), 5.0);
}

Eigen::MatrixXd RandomSpd(int p, std::mt19937& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd a(p, p);
  for (int r = 0; r < p; ++r) {
    for (int q = 0; q < p; ++q) a(r, q) = n(gen);
  }
  return a * a.transpose() + 0.05 * Eigen::MatrixXd::Identity(p, p);
}

Eigen::MatrixXd RandomOrthogonal(int p, std::mt19937& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd g(p, p);
  for (int r = 0; r < p; ++r) {
    for (int q = 0; q < p; ++q) g(r, q) = n(gen);
  }
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

Eigen::VectorXd RandomSingularValues(int p, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd s(p);
  for (int i = 0; i < p; ++i) s(i) = std::pow(10.0, u(gen));
  return s;
}

bool Ac2() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC2");
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  double worst_self = 0.0, min_mu = 1e300, worst_scale = 0.0, worst_cong = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int p = i % 2 ? 12 : 2;
    const Eigen::MatrixXd a = RandomSpd(p, gen);
    const Eigen::MatrixXd b = RandomSpd(p, gen);
    const double mu = SphericityDistance(a, b);
    min_mu = std::min(min_mu, mu);
    worst_self = std::max(worst_self, std::abs(SphericityDistance(a, a)));
    worst_scale = std::max(worst_scale,
                           std::abs(SphericityDistance(scale(gen) * a, scale(gen) * b) - mu));
    // Random rotations around singular values in [0.1, 10]. Round-off in
    // T*A*T' grows with cond(T)^2, so an unbounded draw can swamp 1e-6.
    const Eigen::MatrixXd t = RandomOrthogonal(p, gen) * RandomSingularValues(p, gen).asDiagonal() *
                              RandomOrthogonal(p, gen);
    worst_cong = std::max(
        worst_cong, std::abs(SphericityDistance(t * a * t.transpose(), t * b * t.transpose()) - mu));
  }
  c.Check(worst_self <= 1e-10, fmt::format("self distance {}", worst_self));
  c.Check(min_mu >= -1e-10, fmt::format("negative distance {}", min_mu));
  c.Check(worst_scale <= 1e-9, fmt::format("scale invariance {}", worst_scale));
  c.Check(worst_cong <= 1e-6, fmt::format("congruence invariance {}", worst_cong));
  const Eigen::MatrixXd d = Eigen::Vector2d(1, 4).asDiagonal();
  const double hand = SphericityDistance(d, Eigen::MatrixXd::Identity(2, 2));
  c.Check(std::abs(hand - std::log(1.5625)) <= 1e-9, fmt::format("hand value {}", hand));
  c.Note(fmt::format("min mu {:.3g}, scale err {:.3g}, congruence err {:.3g}", min_mu,
                     worst_scale, worst_cong));
  return c.Finish(Seconds(start), 10.0);
}

bool Ac3() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC3");
  const double bin_hz = 16000.0 / 1024.0;
  for (PhaseVariant v : {PhaseVariant::kLoose, PhaseVariant::kIdentityLocked}) {
    const char* vname = v == PhaseVariant::kLoose ? "loose" : "locked";
    for (double hz : {220.0, 440.0, 1000.0}) {
      const AudioBuffer tone = testing::Tone(hz, 3.0);
      for (double beta : {0.75, 1.25, 1.5}) {
        const double got = testing::DominantFrequency(PitchShift(tone, {beta, v}));
        const double want = beta * hz;
        c.Check(std::abs(got - want) <= std::max(bin_hz, 0.01 * want),
                fmt::format("{} {} Hz x {}: got {:.2f} Hz", vname, hz, beta, got));
      }
      const AudioBuffer same = PitchShift(tone, {1.0, v});
      const double snr = SnrDb(tone.samples, same.samples, 1024, tone.size() - 1024);
      c.Check(snr >= 40.0, fmt::format("{} {} Hz identity SNR {:.1f} dB", vname, hz, snr));
    }
    for (double f0 : {110.0, 220.0}) {
      const AudioBuffer vowel = testing::Vowel(f0, 3.0);
      for (double beta : {0.75, 1.25, 1.5}) {
        const AudioBuffer back = PitchShift(PitchShift(vowel, {beta, v}), {1.0 / beta, v});
        const double f_in = testing::DominantFrequency(vowel);
        const double f_back = testing::DominantFrequency(back);
        // The up-shift discards content above Nyquist / beta, so compare below it.
        const auto band = static_cast<std::size_t>(512.0 / std::max(beta, 1.0 / beta));
        const double lsd = testing::LogSpectralDistortion(vowel, back, band);
        c.Check(std::abs(f_back - f_in) <= 0.01 * f_in,
                fmt::format("{} round trip {} Hz x {}: {:.2f} Hz", vname, f0, beta, f_back));
        c.Check(lsd <= 2.0, fmt::format("{} round trip {} Hz x {}: LSD {:.2f} dB", vname, f0,
                                        beta, lsd));
      }
    }
  }
  return c.Finish(Seconds(start), 30.0);
}

bool Ac4() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC4");
  const StftConfig cfg;
  double worst = 1e300;
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const AudioBuffer in = testing::Noise(48000, seed);
    const AudioBuffer out = Istft(Stft(in, cfg));
    const double snr = SnrDb(in.samples, out.samples, cfg.frame_len, in.size() - cfg.frame_len);
    worst = std::min(worst, snr);
    c.Check(out.size() == in.size(), "length changed");
  }
  c.Check(worst >= 60.0, fmt::format("worst SNR {:.1f} dB", worst));
  c.Note(fmt::format("worst interior SNR {:.1f} dB", worst));
  return c.Finish(Seconds(start), 10.0);
}

bool Ac5() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC5");
  const testing::TempDir dir("acceptance");
  const CorpusManifest manifest = SynthCorpus(kCorpusSeed, 20, 4, dir.path());
  SweepOptions opt;
  std::size_t skipped = 0;
  opt.log = [&](const std::string&) { ++skipped; };
  const SweepResult result = RunDegreeSweep(manifest, opt);
  c.Check(skipped == 0, fmt::format("{} files skipped", skipped));
  c.Check(result.rows.size() == 4u * 2u * 26u, "row count");

  for (Algorithm a : kAllAlgorithms) {
    const std::string name(AlgorithmName(a));
    for (Gender g : {Gender::kMale, Gender::kFemale}) {
      const Curve gs = ExtractCurve(result, a, Metric::kGenderSuccess, g);
      const Curve id = ExtractCurve(result, a, Metric::kIdentification, g);
      std::string gs_line, id_line;
      for (const auto& p : gs) gs_line += fmt::format(" {:.2f}", p.rate);
      for (const auto& p : id) id_line += fmt::format(" {:.2f}", p.rate);
      c.Note(fmt::format("{} {} gender:{}", name, GenderCode(g), gs_line));
      c.Note(fmt::format("{} {} ident: {}", name, GenderCode(g), id_line));
    }
    const Curve gs = ExtractCurve(result, a, Metric::kGenderSuccess);
    const Curve id = ExtractCurve(result, a, Metric::kIdentification);
    c.Check(id.front().rate == 1.0, fmt::format("{} degree-0 identification {:.3f}", name,
                                                id.front().rate));
    c.Check(gs.front().rate >= 0.9,
            fmt::format("{} degree-0 gender success {:.3f}", name, gs.front().rate));

    std::vector<double> degrees, rates;
    for (const auto& p : id) {
      degrees.push_back(p.degree);
      rates.push_back(p.rate);
    }
    const double rho = SpearmanCorrelation(degrees, rates);
    c.Check(rho <= -0.8, fmt::format("{} identification Spearman {:.3f}", name, rho));

    const bool gender_falls = std::any_of(gs.begin(), gs.end(),
                                          [](const CurvePoint& p) { return p.rate < 0.5; });
    c.Check(gender_falls, name + " gender success never falls below 0.5");

    double id_x = NAN, gs_x = NAN;
    try {
      id_x = FindCrossover(id);
      gs_x = FindCrossover(gs);
    } catch (const Error& e) {
      c.Check(false, name + " crossover: " + e.what());
    }
    if (!std::isnan(id_x) && !std::isnan(gs_x)) {
      c.Check(id_x < gs_x, fmt::format("{} identification crossover {:.2f} not below gender "
                                       "crossover {:.2f}",
                                       name, id_x, gs_x));
    }
    double tail = 0.0;
    for (const auto& p : id) {
      if (p.degree >= 20) tail = std::max(tail, p.rate);
    }
    c.Check(tail <= 0.15, fmt::format("{} identification {:.3f} at degree >= 20", name, tail));
    c.Note(fmt::format("{} spearman {:.3f} id crossover {:.2f} gender crossover {:.2f} "
                       "tail max {:.3f}",
                       name, rho, id_x, gs_x, tail));
  }
  return c.Finish(Seconds(start), 600.0);
}

std::string Ratings(const std::string& algo, const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += fmt::format("l{},{}_{},{},{},{}\n", i % 15, algo, i, algo, 4 * (i % 4 + 1),
                       values[i]);
  }
  return out;
}

bool Ac6() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC6");
  // Ten ratings per algorithm whose sums are 37, 33, 34 and 30.
  std::string csv(kRatingsHeader);
  csv += '\n';
  csv += Ratings("voc", {4, 4, 4, 4, 4, 4, 4, 3, 3, 3});
  csv += Ratings("vocf", {4, 4, 4, 3, 3, 3, 3, 3, 3, 3});
  csv += Ratings("quadratic", {5, 4, 4, 3, 3, 3, 3, 3, 3, 3});
  csv += Ratings("bilinear", {5, 4, 3, 3, 3, 3, 3, 2, 2, 2});
  const MosTable t = AggregateMos(csv);
  const std::vector<std::pair<std::string, double>> want{
      {"bilinear", 3.0}, {"quadratic", 3.4}, {"voc", 3.7}, {"vocf", 3.3}};
  c.Check(t.entries.size() == want.size(), "entry count");
  for (std::size_t i = 0; i < want.size() && i < t.entries.size(); ++i) {
    const MosEntry& e = t.entries[i];
    c.Check(e.algorithm == want[i].first && e.count == 10 &&
                fmt::format("{:.1f}", e.mean) == fmt::format("{:.1f}", want[i].second) &&
                std::abs(e.mean - want[i].second) < 1e-12,
            fmt::format("{} mean {}", e.algorithm, e.mean));
  }
  c.Check(FormatMos(t).find("voc 3.7000 10\n") != std::string::npos, "formatted voc line");
  return c.Finish(Seconds(start), 5.0);
}

bool Ac7() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c("AC7");
  std::mt19937 gen(77);
  std::vector<SpeakerModel> models;
  for (int i = 0; i < 5; ++i) {
    models.push_back({fmt::format("spk{:02d}", i), i % 2 ? Gender::kFemale : Gender::kMale,
                      RandomSpd(12, gen), static_cast<std::size_t>(100 + i)});
  }
  const testing::TempDir dir("ac7");
  WriteModelStore(dir / "m.txt", models);
  const auto back = ReadModelStore(dir / "m.txt");
  double worst = 0.0;
  bool meta = back.size() == models.size();
  for (std::size_t i = 0; meta && i < models.size(); ++i) {
    meta = back[i].label == models[i].label && back[i].gender == models[i].gender &&
           back[i].n_frames == models[i].n_frames;
    worst = std::max(worst, (back[i].cov - models[i].cov).cwiseAbs().maxCoeff());
  }
  c.Check(meta, "model metadata differs");
  c.Check(worst <= 1e-12, fmt::format("model store max error {}", worst));

  SweepResult r;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Algorithm a : kAllAlgorithms) {
    for (Gender g : {Gender::kMale, Gender::kFemale}) {
      for (int d = 0; d <= 25; ++d) r.rows.push_back({a, g, d, u(gen), u(gen), 30});
    }
  }
  const std::string csv1 = FormatSweepCsv(r);
  EmitReport(r, dir / "rep");
  const std::string csv2 = FormatSweepCsv(ParseSweepCsv(testing::Slurp(dir / "rep" / "sweep.csv")));
  c.Check(csv1 == csv2, "sweep CSV not byte-identical after re-read");

  AudioBuffer wav;
  wav.samples.resize(48000);
  std::uniform_real_distribution<double> s(-1.0, 1.0);
  for (double& v : wav.samples) v = s(gen);
  WriteWav(dir / "a.wav", wav);
  const AudioBuffer wav_back = ReadWav(dir / "a.wav");
  double wav_err = wav_back.size() == wav.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < wav.size() && i < wav_back.size(); ++i) {
    wav_err = std::max(wav_err, std::abs(wav.samples[i] - wav_back.samples[i]));
  }
  c.Check(wav_err <= std::ldexp(1.0, -15), fmt::format("WAV max error {}", wav_err));
  return c.Finish(Seconds(start), 10.0);
}

}  // namespace
}  // namespace voxmask

// With arguments, runs only the named criteria (e.g. AC3 AC5).
int main(int argc, char** argv) {
  using namespace voxmask;
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria{
      {"AC1", Ac1}, {"AC2", Ac2}, {"AC3", Ac3}, {"AC4", Ac4},
      {"AC5", Ac5}, {"AC6", Ac6}, {"AC7", Ac7}};
  bool all = true;
  const std::vector<std::string> only(argv + 1, argv + argc);
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    try {
      all = run() && all;
    } catch (const std::exception& e) {
      fmt::print("{} FAIL (aborted: {})\n", name, e.what());
      all = false;
    }
  }
  return all ? 0 : 1;
}
