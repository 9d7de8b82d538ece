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

#ifndef VOXMASK_CSV_HPP_
#define VOXMASK_CSV_HPP_

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "voxmask/error.hpp"

namespace voxmask::csv {

// Plain comma-separated lines without quoting.
struct Line {
  std::size_t number;  // 1-based
  std::vector<std::string> fields;
};

inline std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - start);
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    out.emplace_back(f);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIoFailure, "short write to " + path.string());
}

// Splits text into lines, checks the header row and returns the non-blank
// data lines with their line numbers.
inline std::vector<Line> ParseTable(const std::string& text,
                                    std::string_view expected_header) {
  std::vector<Line> rows;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header_seen) {
      if (raw != expected_header) {
        throw Error(ErrorKind::kParseError,
                    "expected header '" + std::string(expected_header) + "'",
                    number);
      }
      header_seen = true;
      continue;
    }
    rows.push_back({number, SplitFields(raw)});
  }
  if (!header_seen) throw Error(ErrorKind::kEmptyInput, "no header row");
  return rows;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace voxmask::csv

#endif  // VOXMASK_CSV_HPP_
