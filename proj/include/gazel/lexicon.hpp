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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gazel/error.hpp"
#include "gazel/kb.hpp"
#include "gazel/synonyms.hpp"
#include "gazel/text.hpp"

namespace gazel {

enum class Provenance { original, synonym_expanded };

inline std::string_view provenance_name(Provenance p) {
  return p == Provenance::original ? "original" : "synonym-expanded";
}

inline Provenance provenance_from_name(std::string_view s,
                                       const std::string& where) {
  if (s == "original") return Provenance::original;
  if (s == "synonym-expanded") return Provenance::synonym_expanded;
  throw ParseError(where + ": unknown provenance '" + std::string(s) + "'");
}

/// Static per-candidate evidence, joined from the prior store at compile
/// time. Absent evidence stays 0 so ranking orders stay total.
struct StaticScores {
  double link_prob = 0.0;
  double corpus_freq = 0.0;
  double pagerank = 0.0;
  double synonym_penalty = 1.0;

  bool operator==(const StaticScores&) const = default;
};

struct CandidateEntry {
  ConceptId concept;
  bool label_is_preferred = false;
  Provenance origin = Provenance::original;
  StaticScores static_scores;

  bool operator==(const CandidateEntry&) const = default;
};

struct LabelEntry {
  std::vector<CandidateEntry> candidates;  // sorted by concept id, unique
  Provenance provenance = Provenance::original;

  bool operator==(const LabelEntry&) const = default;
};

/// The gazetteer: normalized label -> candidate set.
class Lexicon {
 public:
  std::map<std::string, LabelEntry> entries;

  // Inserts keeping candidates sorted and unique per concept; an existing
  // candidate for the same concept is left untouched.
  void add_candidate(const std::string& label, CandidateEntry cand,
                     Provenance label_provenance) {
    auto [it, inserted] = entries.try_emplace(label);
    LabelEntry& e = it->second;
    if (inserted) {
      e.provenance = label_provenance;
    } else if (label_provenance == Provenance::original) {
      e.provenance = Provenance::original;
    }
    auto pos = std::lower_bound(
        e.candidates.begin(), e.candidates.end(), cand.concept,
        [](const CandidateEntry& c, const ConceptId& id) {
          return c.concept < id;
        });
    if (pos != e.candidates.end() && pos->concept == cand.concept) {
      pos->label_is_preferred = pos->label_is_preferred || cand.label_is_preferred;
      return;
    }
    e.candidates.insert(pos, std::move(cand));
  }

  const LabelEntry* find(const std::string& label) const {
    auto it = entries.find(label);
    return it == entries.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries.size(); }

  bool operator==(const Lexicon&) const = default;
};

/// One entry per (normalized label -> concept); the first label of a
/// concept carries the preferred flag.
inline Lexicon build_lexicon(const KnowledgeBase& kb) {
  if (kb.empty()) throw Error("build_lexicon: empty knowledge base");
  Lexicon lex;
  for (const auto& [id, concept] : kb.concepts()) {
    for (std::size_t i = 0; i < concept.labels.size(); ++i) {
      CandidateEntry cand;
      cand.concept = id;
      cand.label_is_preferred = (i == 0);
      cand.origin = Provenance::original;
      lex.add_candidate(normalize_label(concept.labels[i]), std::move(cand),
                        Provenance::original);
    }
  }
  return lex;
}

// Generates one-substitution variants of short original labels: for every
// label of at most max_tokens tokens and every synonym pair whose `from`
// matches a token, the token is rewritten (or deleted for empty `to`).
// Variants join the lexicon with synonym-expanded provenance and a
// synonym_penalty static score; original entries are never touched and
// expansion never chains onto expanded labels.
inline Lexicon expand_with_synonyms(const Lexicon& lex,
                                    const SynonymTable& table,
                                    std::size_t max_tokens = 3,
                                    double synonym_penalty = 0.9) {
  if (max_tokens < 1) throw Error("expand_with_synonyms: max_tokens >= 1");
  Lexicon out = lex;
  if (table.pairs.empty()) return out;

  // from -> [to...]
  std::map<std::string, std::vector<std::string>> subs;
  for (const auto& [pair, score] : table.pairs) {
    subs[pair.first].push_back(pair.second);
  }

  for (const auto& [label, entry] : lex.entries) {
    if (entry.provenance != Provenance::original) continue;
    const std::vector<std::string> tokens = text::tokenize_words(label);
    if (tokens.empty() || tokens.size() > max_tokens) continue;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto it = subs.find(tokens[i]);
      if (it == subs.end()) continue;
      for (const std::string& to : it->second) {
        std::string variant;
        for (std::size_t k = 0; k < tokens.size(); ++k) {
          std::string_view piece = (k == i) ? std::string_view(to)
                                            : std::string_view(tokens[k]);
          if (piece.empty()) continue;
          if (!variant.empty()) variant += ' ';
          variant += piece;
        }
        if (variant.empty()) continue;
        const std::string key = normalize_label(variant);
        if (key == label) continue;
        for (const CandidateEntry& src : entry.candidates) {
          CandidateEntry cand;
          cand.concept = src.concept;
          cand.label_is_preferred = false;
          cand.origin = Provenance::synonym_expanded;
          cand.static_scores.synonym_penalty = synonym_penalty;
          out.add_candidate(key, std::move(cand),
                            Provenance::synonym_expanded);
        }
      }
    }
  }
  return out;
}

}  // namespace gazel
