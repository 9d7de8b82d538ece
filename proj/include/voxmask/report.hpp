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

#ifndef VOXMASK_REPORT_HPP_
#define VOXMASK_REPORT_HPP_

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "voxmask/csv.hpp"
#include "voxmask/error.hpp"
#include "voxmask/sweep.hpp"

namespace voxmask {

inline constexpr std::string_view kSweepHeader =
    "algorithm,gender,degree,gender_success_rate,identification_rate,n_files";

inline std::string FormatSweepCsv(const SweepResult& result) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const SweepRow& r : result.rows) {
    out += fmt::format("{},{},{},{:.6f},{:.6f},{}\n", AlgorithmName(r.algorithm),
                       GenderCode(r.gender), r.degree, r.gender_success_rate,
                       r.identification_rate, r.n_files);
  }
  return out;
}

inline SweepResult ParseSweepCsv(const std::string& text) {
  SweepResult result;
  for (const csv::Line& line : csv::ParseTable(text, kSweepHeader)) {
    const auto& f = line.fields;
    if (f.size() != 6) {
      throw Error(ErrorKind::kParseError,
                  fmt::format("expected 6 fields, got {}", f.size()), line.number);
    }
    const auto algo = ParseAlgorithm(f[0]);
    const auto gender = ParseGender(f[1]);
    const auto degree = csv::ParseNumber<int>(f[2]);
    const auto gsr = csv::ParseNumber<double>(f[3]);
    const auto idr = csv::ParseNumber<double>(f[4]);
    const auto n = csv::ParseNumber<std::size_t>(f[5]);
    if (!algo || !gender || *gender == Gender::kUnspecified || !degree || !gsr ||
        !idr || !n) {
      throw Error(ErrorKind::kParseError, "malformed sweep row", line.number);
    }
    result.rows.push_back({*algo, *gender, *degree, *gsr, *idr, *n});
  }
  return result;
}

namespace report_internal {

inline constexpr std::string_view kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                               "#ff7f0e"};

// Rates against degree for one algorithm: gender success (solid) and
// identification (dashed) for each gender. The plot area sits inside a
// margin, so rates of exactly 0 and 1 stay visible.
inline std::string RenderSvg(const SweepResult& result, Algorithm algo) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 140, kTop = 40,
                   kBottom = 50;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  int max_degree = 1;
  for (const SweepRow& r : result.rows) {
    if (r.algorithm == algo) max_degree = std::max(max_degree, r.degree);
  }
  auto x = [&](double d) { return kLeft + pw * d / max_degree; };
  auto y = [&](double rate) { return kTop + ph * (1.0 - rate); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" "
      "width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH, kW, kH);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                     kW, kH);
  svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kLeft + pw / 2, AlgorithmName(algo));
  for (int i = 0; i <= 4; ++i) {
    const double rate = i / 4.0;
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n",
        kLeft, y(rate), kLeft + pw, y(rate));
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n",
                       kLeft - 6, y(rate) + 4, rate);
  }
  const int tick = max_degree > 10 ? 5 : 1;
  for (int d = 0; d <= max_degree; d += tick) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       x(d), kTop + ph + 18, d);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">degree</text>\n",
                     kLeft + pw / 2, kH - 8);
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
      kLeft, kTop, pw, ph);

  int series = 0;
  for (Gender g : {Gender::kMale, Gender::kFemale}) {
    for (Metric m : {Metric::kGenderSuccess, Metric::kIdentification}) {
      const Curve curve = ExtractCurve(result, algo, m, g);
      const std::string_view color = kColors[series % 4];
      const std::string label =
          fmt::format("{} {}", GenderCode(g),
                      m == Metric::kGenderSuccess ? "gender" : "identity");
      const double ly = kTop + 16.0 * series + 8;
      svg += fmt::format(
          "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
          "stroke-width=\"2\"{}/>\n",
          kLeft + pw + 10, ly, kLeft + pw + 34, ly, color,
          m == Metric::kIdentification ? " stroke-dasharray=\"5,3\"" : "");
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n",
                         kLeft + pw + 40, ly + 4, label);
      ++series;
      if (curve.empty()) continue;
      std::string points;
      for (const CurvePoint& p : curve) {
        points += fmt::format("{:.2f},{:.2f} ", x(p.degree), y(p.rate));
      }
      points.pop_back();
      svg += fmt::format(
          "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{}/>\n",
          points, color,
          m == Metric::kIdentification ? " stroke-dasharray=\"5,3\"" : "");
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace report_internal

// Writes sweep.csv and sweep_<algorithm>.svg for every algorithm present.
inline void EmitReport(const SweepResult& result, const std::filesystem::path& out_dir) {
  if (result.rows.empty()) throw Error(ErrorKind::kInvalidArgument, "empty sweep result");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIoFailure, "cannot create " + out_dir.string());
  csv::WriteFile(out_dir / "sweep.csv", FormatSweepCsv(result));
  std::vector<Algorithm> algos;
  for (const SweepRow& r : result.rows) {
    if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end()) {
      algos.push_back(r.algorithm);
    }
  }
  for (Algorithm a : algos) {
    csv::WriteFile(out_dir / fmt::format("sweep_{}.svg", AlgorithmName(a)),
                   report_internal::RenderSvg(result, a));
  }
}

}  // namespace voxmask

#endif  // VOXMASK_REPORT_HPP_
