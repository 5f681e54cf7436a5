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
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gazel/error.hpp"
#include "gazel/ioutil.hpp"
#include "gazel/kb.hpp"
#include "gazel/levenshtein.hpp"
#include "gazel/text.hpp"

namespace gazel {

/// Word-level synonym: `from` may be rewritten as `to`. An empty `to` marks
/// a deletable word.
struct SynonymPair {
  std::string from;
  std::string to;
  double score = 0.0;

  bool operator==(const SynonymPair&) const = default;
};

/// Knobs for pairwise label alignment.
struct AlignmentConfig {
  double max_normalized_distance = 0.34;
  int min_word_length = 4;
};

struct SynonymTable {
  // (from, to) -> score; unique by construction.
  std::map<std::pair<std::string, std::string>, double> pairs;
  double threshold = 12.0;
  double empty_threshold = 1000.0;

  bool contains(std::string_view from, std::string_view to) const {
    return pairs.find({std::string(from), std::string(to)}) != pairs.end();
  }
  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

/// Manual corrections applied after automatic derivation.
struct OverrideList {
  std::set<std::pair<std::string, std::string>> blocked;
  std::vector<SynonymPair> forced;  // unique (from, to), disjoint from blocked
};

/// Raw harvested scores before thresholding.
using RawPairScores = std::map<std::pair<std::string, std::string>, double>;

// Aligns the words of two alternative labels of one concept. Identical words
// are matched and removed first; remaining words within the distance
// threshold are greedily matched best-first and emitted as synonyms; what is
// left over is paired positionally, and leftover words on the longer side
// pair with the empty string. Residues longer than two tokens are dropped as
// noise.
inline std::vector<std::pair<std::string, std::string>> align_label_pair(
    std::string_view label_a, std::string_view label_b,
    const AlignmentConfig& cfg = {}) {
  const std::vector<std::string> ta = text::tokenize_words(label_a);
  const std::vector<std::string> tb = text::tokenize_words(label_b);
  std::vector<bool> used_a(ta.size(), false), used_b(tb.size(), false);
  std::vector<std::pair<std::string, std::string>> out;

  // Exact matches, leftmost first.
  for (std::size_t i = 0; i < ta.size(); ++i) {
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if (!used_b[j] && ta[i] == tb[j]) {
        used_a[i] = used_b[j] = true;
        break;
      }
    }
  }

  // Similar words, best (lowest-distance) pairs first; ties by position.
  struct Cand {
    double d;
    std::size_t i, j;
    bool operator<(const Cand& o) const {
      return std::tie(d, i, j) < std::tie(o.d, o.i, o.j);
    }
  };
  std::vector<Cand> cands;
  const auto min_len = static_cast<std::size_t>(cfg.min_word_length);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (used_a[i] || utf8::length(ta[i]) < min_len) continue;
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if (used_b[j] || utf8::length(tb[j]) < min_len) continue;
      if (ta[i] == tb[j]) continue;
      const double d = normalized_levenshtein(ta[i], tb[j]);
      if (d <= cfg.max_normalized_distance) cands.push_back({d, i, j});
    }
  }
  std::sort(cands.begin(), cands.end());
  for (const Cand& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    out.emplace_back(ta[c.i], tb[c.j]);
  }

  // Residues.
  std::vector<std::string> ra, rb;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!used_a[i]) ra.push_back(ta[i]);
  }
  for (std::size_t j = 0; j < tb.size(); ++j) {
    if (!used_b[j]) rb.push_back(tb[j]);
  }
  if (ra.size() <= 2 && rb.size() <= 2) {
    const std::size_t common = std::min(ra.size(), rb.size());
    for (std::size_t k = 0; k < common; ++k) {
      if (ra[k] != rb[k]) out.emplace_back(ra[k], rb[k]);
    }
    for (std::size_t k = common; k < ra.size(); ++k) {
      out.emplace_back(ra[k], std::string());
    }
    for (std::size_t k = common; k < rb.size(); ++k) {
      out.emplace_back(rb[k], std::string());
    }
  }
  return out;
}

// Harvests scored pairs from every unordered label pair of every concept.
// A concept with L labels contributes occurrence_count * 2/(L*(L-1)) per
// pair, normalizing against its number of label pairs so label-rich concepts
// do not inflate counts. Non-empty pairs accrue in both directions.
inline RawPairScores derive_synonyms(const KnowledgeBase& kb,
                                     const AlignmentConfig& cfg = {}) {
  if (kb.empty()) throw Error("derive_synonyms: empty knowledge base");
  RawPairScores total;
  for (const auto& [id, concept] : kb.concepts()) {
    const auto& labels = concept.labels;
    const std::size_t n = labels.size();
    if (n < 2) continue;
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Canonical orientation makes the harvest independent of label order.
        const std::string& first =
            labels[i] <= labels[j] ? labels[i] : labels[j];
        const std::string& second =
            labels[i] <= labels[j] ? labels[j] : labels[i];
        for (auto& p : align_label_pair(first, second, cfg)) {
          ++counts[std::move(p)];
        }
      }
    }
    const double norm = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
    for (const auto& [pair, c] : counts) {
      const double contribution = static_cast<double>(c) * norm;
      total[pair] += contribution;
      if (!pair.second.empty()) {
        total[{pair.second, pair.first}] += contribution;
      }
    }
  }
  return total;
}

// Thresholds the harvest and applies manual overrides. Deletions (empty
// `to`) must clear `empty_threshold`; everything else `threshold`. Forced
// pairs enter at no less than the applicable threshold so the table
// invariant holds.
inline SynonymTable finalize_table(const RawPairScores& raw, double threshold,
                                   double empty_threshold,
                                   const OverrideList& overrides = {}) {
  if (threshold <= 0 || empty_threshold <= 0) {
    throw Error("finalize_table: thresholds must be positive");
  }
  SynonymTable table;
  table.threshold = threshold;
  table.empty_threshold = empty_threshold;
  for (const auto& [pair, score] : raw) {
    if (pair.first.empty() || pair.first == pair.second) continue;
    const double need = pair.second.empty() ? empty_threshold : threshold;
    if (score < need) continue;
    if (overrides.blocked.contains(pair)) continue;
    table.pairs[pair] = score;
  }
  for (const SynonymPair& f : overrides.forced) {
    if (f.from.empty() || f.from == f.to) {
      throw Error("finalize_table: invalid forced pair '" + f.from + "'");
    }
    const double need = f.to.empty() ? empty_threshold : threshold;
    table.pairs[{f.from, f.to}] = std::max(f.score, need);
  }
  return table;
}

inline SynonymTable finalize_table(const RawPairScores& raw,
                                   const OverrideList& overrides = {}) {
  return finalize_table(raw, 12.0, 1000.0, overrides);
}

/// TSV: from<TAB>to<TAB>score. An empty `to` cell encodes the empty string.
inline std::string synonyms_to_tsv(const SynonymTable& table) {
  std::string out;
  for (const auto& [pair, score] : table.pairs) {
    out += io::tsv_escape(pair.first);
    out += '\t';
    out += io::tsv_escape(pair.second);
    out += '\t';
    out += io::format_double(score);
    out += '\n';
  }
  return out;
}

inline void save_synonyms(const SynonymTable& table,
                          const std::filesystem::path& path) {
  io::write_file(path, synonyms_to_tsv(table));
}

inline SynonymTable synonyms_from_tsv(std::string_view content,
                                      const std::string& source) {
  SynonymTable table;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() != 3) throw ParseError(where + ": expected 3 columns");
    std::string from = io::tsv_unescape(cols[0], where);
    std::string to = io::tsv_unescape(cols[1], where);
    if (from.empty()) throw ParseError(where + ": empty 'from'");
    if (from == to) throw ParseError(where + ": from == to");
    const double score = io::parse_double(cols[2], where);
    if (score < 0) throw ParseError(where + ": negative score");
    if (!table.pairs.emplace(std::make_pair(std::move(from), std::move(to)), score)
             .second) {
      throw ParseError(where + ": duplicate pair");
    }
  }
  return table;
}

inline SynonymTable load_synonyms(const std::filesystem::path& path) {
  return synonyms_from_tsv(io::read_file(path), path.string());
}

/// TSV: action (block|force)<TAB>from<TAB>to[<TAB>score].
inline OverrideList overrides_from_tsv(std::string_view content,
                                       const std::string& source) {
  OverrideList ov;
  std::set<std::pair<std::string, std::string>> forced_keys;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() < 3 || cols.size() > 4) {
      throw ParseError(where + ": expected 3 or 4 columns");
    }
    const std::string_view action = cols[0];
    std::string from = io::tsv_unescape(cols[1], where);
    std::string to = io::tsv_unescape(cols[2], where);
    if (from.empty()) throw ParseError(where + ": empty 'from'");
    if (action == "block") {
      if (cols.size() != 3) throw ParseError(where + ": block takes no score");
      ov.blocked.emplace(std::move(from), std::move(to));
    } else if (action == "force") {
      double score = 0.0;
      if (cols.size() == 4) score = io::parse_double(cols[3], where);
      if (!forced_keys.emplace(from, to).second) {
        throw ParseError(where + ": duplicate forced pair");
      }
      ov.forced.push_back({std::move(from), std::move(to), score});
    } else {
      throw ParseError(where + ": unknown action '" + std::string(action) +
                       "'");
    }
  }
  for (const SynonymPair& f : ov.forced) {
    if (ov.blocked.contains({f.from, f.to})) {
      throw ParseError(source + ": pair ('" + f.from + "','" + f.to +
                       "') is both blocked and forced");
    }
  }
  return ov;
}

inline OverrideList load_overrides(const std::filesystem::path& path) {
  return overrides_from_tsv(io::read_file(path), path.string());
}

}  // namespace gazel
