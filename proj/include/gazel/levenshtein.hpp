// Copyright 2026 The Gazel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string_view>
#include <vector>

#include "gazel/utf8.hpp"

namespace gazel {

/// Unit-cost Levenshtein distance over code points, single-row DP.
inline std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t corner = row[0];
    row[0] = i + 1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t up = row[j + 1];
      row[j + 1] = (a[i] == b[j])
                       ? corner
                       : 1 + std::min({corner, up, row[j]});
      corner = up;
    }
  }
  return row[b.size()];
}

/// Length-adjusted distance: editdistance(a,b) / max(|a|, |b|, 1).
/// Returns a value in [0,1]; 0 iff a == b. Lengths are code points.
inline double normalized_levenshtein(std::string_view a8, std::string_view b8) {
  const std::u32string a = utf8::decode_or_throw(a8);
  const std::u32string b = utf8::decode_or_throw(b8);
  const std::size_t denom = std::max({a.size(), b.size(), std::size_t{1}});
  return static_cast<double>(edit_distance(a, b)) /
         static_cast<double>(denom);
}

}  // namespace gazel
