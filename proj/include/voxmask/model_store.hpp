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

#ifndef VOXMASK_MODEL_STORE_HPP_
#define VOXMASK_MODEL_STORE_HPP_

#include <fmt/format.h>

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "voxmask/error.hpp"
#include "voxmask/speaker_id.hpp"

namespace voxmask {

// Text store holding many models:
//
//   SPKMODEL v1 P=<int> label=<string> gender=<M|F|U> frames=<int>
//   <P lines of P floats, row-major>
//   <blank line>
//
// Values are printed with 17 significant digits so they re-read exactly.
inline std::string FormatModelStore(const std::vector<SpeakerModel>& models) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const SpeakerModel& m = models[i];
    if (m.label.empty() ||
        m.label.find_first_of(" \t\r\n") != std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "model label must be non-empty without whitespace: '" +
                      m.label + "'");
    }
    if (i > 0) out += '\n';
    out += fmt::format("SPKMODEL v1 P={} label={} gender={} frames={}\n",
                       m.cov.rows(), m.label, GenderCode(m.gender), m.n_frames);
    for (Eigen::Index r = 0; r < m.cov.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cov.cols(); ++c) {
        if (c > 0) out += ' ';
        out += fmt::format("{:.17g}", m.cov(r, c));
      }
      out += '\n';
    }
  }
  return out;
}

namespace model_store_internal {

inline std::vector<std::string_view> SplitWs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view Field(std::string_view token, std::string_view key,
                              std::size_t line) {
  if (token.substr(0, key.size()) != key) {
    throw Error(ErrorKind::kParseError,
                "expected '" + std::string(key) + "...', got '" +
                    std::string(token) + "'",
                line);
  }
  return token.substr(key.size());
}

template <typename T>
T ParseNumber(std::string_view s, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::kParseError,
                "bad number '" + std::string(s) + "'", line);
  }
  return value;
}

}  // namespace model_store_internal

inline std::vector<SpeakerModel> ParseModelStore(const std::string& text) {
  using namespace model_store_internal;
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  std::vector<SpeakerModel> models;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (SplitWs(lines[i]).empty()) {
      ++i;
      continue;
    }
    const std::size_t header_line = i + 1;
    const auto tok = SplitWs(lines[i]);
    if (tok.size() != 6 || tok[0] != "SPKMODEL" || tok[1] != "v1") {
      throw Error(ErrorKind::kParseError, "expected SPKMODEL v1 header",
                  header_line);
    }
    const int p = ParseNumber<int>(Field(tok[2], "P=", header_line), header_line);
    if (p < 1) throw Error(ErrorKind::kParseError, "P must be >= 1", header_line);
    SpeakerModel m;
    m.label = std::string(Field(tok[3], "label=", header_line));
    const auto gender = ParseGender(Field(tok[4], "gender=", header_line));
    if (m.label.empty() || !gender) {
      throw Error(ErrorKind::kParseError, "bad label or gender", header_line);
    }
    m.gender = *gender;
    m.n_frames = ParseNumber<std::size_t>(Field(tok[5], "frames=", header_line),
                                          header_line);
    m.cov.resize(p, p);
    for (int r = 0; r < p; ++r) {
      ++i;
      if (i >= lines.size()) {
        throw Error(ErrorKind::kParseError, "truncated matrix", i);
      }
      const auto row = SplitWs(lines[i]);
      if (static_cast<int>(row.size()) != p) {
        throw Error(ErrorKind::kParseError,
                    "expected " + std::to_string(p) + " values", i + 1);
      }
      for (int c = 0; c < p; ++c) m.cov(r, c) = ParseNumber<double>(row[c], i + 1);
    }
    models.push_back(std::move(m));
    ++i;
  }
  return models;
}

inline void WriteModelStore(const std::filesystem::path& path,
                            const std::vector<SpeakerModel>& models) {
  const std::string text = FormatModelStore(models);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIoFailure, "short write to " + path.string());
}

inline std::vector<SpeakerModel> ReadModelStore(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseModelStore(ss.str());
}

}  // namespace voxmask

#endif  // VOXMASK_MODEL_STORE_HPP_
