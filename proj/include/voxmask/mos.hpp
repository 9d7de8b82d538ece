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

#ifndef VOXMASK_MOS_HPP_
#define VOXMASK_MOS_HPP_

#include <fmt/format.h>

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "voxmask/csv.hpp"
#include "voxmask/error.hpp"

namespace voxmask {

inline constexpr std::string_view kRatingsHeader =
    "listener_id,file_id,algorithm,degree,rating";

struct MosEntry {
  std::string algorithm;
  double mean;
  std::size_t count;
};

// Sorted by algorithm name.
struct MosTable {
  std::vector<MosEntry> entries;
};

// Mean opinion score per algorithm. Ratings are integers 1..5; the mean is
// the integer sum divided by the count, so it is exact up to one rounding.
inline MosTable AggregateMos(const std::string& text) {
  struct Acc {
    long sum = 0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> acc;
  for (const csv::Line& line : csv::ParseTable(text, kRatingsHeader)) {
    const auto& f = line.fields;
    if (f.size() != 5) {
      throw Error(ErrorKind::kParseError,
                  fmt::format("expected 5 fields, got {}", f.size()), line.number);
    }
    if (f[2].empty()) {
      throw Error(ErrorKind::kParseError, "empty algorithm", line.number);
    }
    if (!csv::ParseNumber<int>(f[3])) {
      throw Error(ErrorKind::kParseError, "bad degree '" + f[3] + "'", line.number);
    }
    const auto rating = csv::ParseNumber<int>(f[4]);
    if (!rating || *rating < 1 || *rating > 5) {
      throw Error(ErrorKind::kParseError,
                  "rating must be an integer in 1..5, got '" + f[4] + "'",
                  line.number);
    }
    Acc& a = acc[f[2]];
    a.sum += *rating;
    ++a.n;
  }
  if (acc.empty()) throw Error(ErrorKind::kEmptyInput, "no ratings");
  MosTable table;
  for (const auto& [algo, a] : acc) {
    table.entries.push_back(
        {algo, static_cast<double>(a.sum) / static_cast<double>(a.n), a.n});
  }
  return table;
}

inline MosTable LoadMos(const std::filesystem::path& path) {
  return AggregateMos(csv::ReadFile(path));
}

// One `algorithm mean n` line per entry, mean with 4 decimals.
inline std::string FormatMos(const MosTable& table) {
  std::string out;
  for (const MosEntry& e : table.entries) {
    out += fmt::format("{} {:.4f} {}\n", e.algorithm, e.mean, e.count);
  }
  return out;
}

}  // namespace voxmask

#endif  // VOXMASK_MOS_HPP_
