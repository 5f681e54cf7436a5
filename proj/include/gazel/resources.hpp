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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gazel/automaton.hpp"
#include "gazel/context.hpp"
#include "gazel/error.hpp"
#include "gazel/ioutil.hpp"
#include "gazel/lexicon.hpp"
#include "gazel/priors.hpp"
#include "gazel/text.hpp"

namespace gazel {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

/// lexicon.tsv: label<TAB>cui<TAB>preferred(0|1)<TAB>provenance, one row per
/// candidate, sorted by (label, cui).
inline std::string lexicon_to_tsv(const Lexicon& lex) {
  std::string out;
  for (const auto& [label, entry] : lex.entries) {
    for (const CandidateEntry& c : entry.candidates) {
      out += io::tsv_escape(label);
      out += '\t';
      out += io::tsv_escape(c.concept.value());
      out += '\t';
      out += c.label_is_preferred ? '1' : '0';
      out += '\t';
      out += provenance_name(c.origin);
      out += '\n';
    }
  }
  return out;
}

inline Lexicon lexicon_from_tsv(std::string_view content,
                                const std::string& source,
                                double synonym_penalty) {
  Lexicon lex;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() != 4) throw ParseError(where + ": expected 4 columns");
    const std::string label = io::tsv_unescape(cols[0], where);
    if (label.empty()) throw ParseError(where + ": empty label");
    CandidateEntry cand;
    cand.concept = ConceptId(io::tsv_unescape(cols[1], where));
    if (cols[2] == "1") {
      cand.label_is_preferred = true;
    } else if (cols[2] != "0") {
      throw ParseError(where + ": preferred flag must be 0 or 1");
    }
    cand.origin = provenance_from_name(cols[3], where);
    if (cand.origin == Provenance::synonym_expanded) {
      cand.static_scores.synonym_penalty = synonym_penalty;
    }
    lex.add_candidate(label, std::move(cand), cand.origin);
  }
  return lex;
}

/// The immutable runtime bundle. Safe to share across annotator threads.
struct CompiledResources {
  struct PatternKey {
    std::string key;          // normalized lexicon label
    bool case_sensitive = false;
  };

  Lexicon lexicon;  // static scores joined from priors
  std::set<std::string> stoplist;
  PriorStore priors;
  std::map<ConceptId, ConceptVector> concept_vectors;
  std::size_t vector_dim = 0;
  std::map<std::string, std::string> config;  // effective build config

  AhoCorasick automaton;  // over case-folded non-stoplisted labels
  std::vector<std::vector<PatternKey>> pattern_keys;  // by pattern id
  std::map<ConceptId, std::string> preferred_labels;
  std::string fingerprint;  // fnv1a-64 over the serialized content

  const std::string& preferred_label(const ConceptId& id) const {
    static const std::string empty;
    auto it = preferred_labels.find(id);
    return it == preferred_labels.end() ? empty : it->second;
  }
};

namespace detail {

inline std::string config_to_flat(
    const std::map<std::string, std::string>& config) {
  std::string out;
  for (const auto& [k, v] : config) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

inline std::string stoplist_to_text(const std::set<std::string>& stoplist) {
  std::string out;
  for (const std::string& s : stoplist) {
    out += s;
    out += '\n';
  }
  return out;
}

}  // namespace detail

// Builds the immutable bundle: joins prior evidence into candidate entries,
// normalizes and applies the stoplist, builds the matching automaton over
// the surviving labels and fingerprints the whole configuration.
inline CompiledResources compile(
    Lexicon lexicon, const std::vector<std::string>& stoplist_entries,
    PriorStore priors, std::map<ConceptId, ConceptVector> concept_vectors = {},
    std::size_t vector_dim = 0,
    std::map<std::string, std::string> config = {}) {
  CompiledResources res;

  for (const std::string& raw : stoplist_entries) {
    if (raw.empty()) continue;
    try {
      const std::string norm = normalize_label(raw);
      if (!norm.empty()) res.stoplist.insert(norm);
    } catch (const Error& e) {
      std::cerr << "warning: skipping stoplist entry: " << e.what() << "\n";
    }
  }

  for (auto& [label, entry] : lexicon.entries) {
    for (CandidateEntry& cand : entry.candidates) {
      if (auto it = priors.link_prob.find({label, cand.concept});
          it != priors.link_prob.end()) {
        cand.static_scores.link_prob = it->second;
      } else {
        cand.static_scores.link_prob = 0.0;
      }
      if (auto it = priors.concept_freq.find(cand.concept);
          it != priors.concept_freq.end()) {
        cand.static_scores.corpus_freq = it->second;
      } else {
        cand.static_scores.corpus_freq = 0.0;
      }
      if (auto it = priors.pagerank.find(cand.concept);
          it != priors.pagerank.end()) {
        cand.static_scores.pagerank = it->second;
      } else {
        cand.static_scores.pagerank = 0.0;
      }
    }
  }

  // Record the expansion penalty so a reloaded bundle reproduces it.
  if (!config.contains("lexicon.synonym_penalty")) {
    double penalty = 0.9;
    for (const auto& [label, entry] : lexicon.entries) {
      for (const CandidateEntry& c : entry.candidates) {
        if (c.origin == Provenance::synonym_expanded) {
          penalty = c.static_scores.synonym_penalty;
          goto found;
        }
      }
    }
  found:
    config["lexicon.synonym_penalty"] = io::format_double(penalty);
  }

  res.lexicon = std::move(lexicon);
  res.priors = std::move(priors);
  res.concept_vectors = std::move(concept_vectors);
  res.vector_dim = vector_dim;
  res.config = std::move(config);

  AhoCorasick::Builder builder;
  std::map<std::string, std::vector<CompiledResources::PatternKey>> by_pattern;
  for (const auto& [label, entry] : res.lexicon.entries) {
    if (res.stoplist.contains(label)) continue;
    const std::u32string cps = utf8::decode_or_throw(label, "label");
    const std::string pattern = utf8::encode(text::lower(cps));
    by_pattern[pattern].push_back({label, cps.size() <= 3});
  }
  res.pattern_keys.clear();
  for (auto& [pattern, keys] : by_pattern) {
    const std::uint32_t id = builder.add(pattern);
    if (id >= res.pattern_keys.size()) res.pattern_keys.resize(id + 1);
    res.pattern_keys[id] = std::move(keys);
  }
  res.automaton = std::move(builder).build();

  for (const auto& [label, entry] : res.lexicon.entries) {
    for (const CandidateEntry& c : entry.candidates) {
      if (c.label_is_preferred) res.preferred_labels.emplace(c.concept, label);
    }
  }

  std::uint64_t h = fnv1a64("gazel-bundle-v1");
  const auto mix = [&h](std::string_view part) {
    h = fnv1a64(part, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  };
  mix(lexicon_to_tsv(res.lexicon));
  mix(detail::stoplist_to_text(res.stoplist));
  mix(concept_scores_to_tsv(res.priors.concept_freq));
  mix(link_prob_to_tsv(res.priors.link_prob));
  mix(concept_scores_to_tsv(res.priors.pagerank));
  mix(concept_vectors_to_tsv(res.concept_vectors));
  mix(std::to_string(res.vector_dim));
  mix(detail::config_to_flat(res.config));
  res.fingerprint = to_hex(h);
  return res;
}

// ---- Bundle directory ----------------------------------------------------
// <dir>/lexicon.tsv, <dir>/stoplist.txt, <dir>/priors/{concept_freq,
// link_prob, pagerank}.tsv, optional <dir>/context/vectors.tsv and
// <dir>/meta.json. The automaton is rebuilt at load time.

inline void save_bundle(const CompiledResources& res,
                        const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  io::write_file(dir / "lexicon.tsv", lexicon_to_tsv(res.lexicon));
  io::write_file(dir / "stoplist.txt", detail::stoplist_to_text(res.stoplist));
  save_priors(res.priors, dir / "priors");
  if (!res.concept_vectors.empty()) {
    fs::create_directories(dir / "context");
    io::write_file(dir / "context" / "vectors.tsv",
                   concept_vectors_to_tsv(res.concept_vectors));
  }

  nlohmann::json meta;
  meta["format_version"] = kBundleFormatVersion;
  meta["tool_version"] = std::string(kToolVersion);
  meta["fingerprint"] = res.fingerprint;
  nlohmann::json counts;
  counts["labels"] = res.lexicon.size();
  std::size_t expanded = 0;
  std::set<std::string> cuis;
  for (const auto& [label, entry] : res.lexicon.entries) {
    if (entry.provenance == Provenance::synonym_expanded) ++expanded;
    for (const auto& c : entry.candidates) cuis.insert(c.concept.value());
  }
  counts["expanded_labels"] = expanded;
  counts["concepts"] = cuis.size();
  counts["stoplist"] = res.stoplist.size();
  counts["automaton_patterns"] = res.automaton.pattern_count();
  counts["pagerank_nodes"] = res.priors.pagerank.size();
  counts["link_prob_rows"] = res.priors.link_prob.size();
  counts["concept_vectors"] = res.concept_vectors.size();
  counts["vector_dim"] = res.vector_dim;
  meta["counts"] = std::move(counts);
  meta["config"] = res.config;
  io::write_file(dir / "meta.json", meta.dump(2) + "\n");
}

inline CompiledResources load_bundle(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path meta_path = dir / "meta.json";
  nlohmann::json meta =
      nlohmann::json::parse(io::read_file(meta_path), nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) {
    throw ParseError(meta_path.string() + ": invalid JSON");
  }
  if (!meta.contains("format_version") ||
      meta["format_version"].get<int>() != kBundleFormatVersion) {
    throw ParseError(meta_path.string() + ": unsupported format_version");
  }
  std::map<std::string, std::string> config;
  if (meta.contains("config")) {
    for (const auto& [k, v] : meta["config"].items()) {
      config[k] = v.get<std::string>();
    }
  }
  double penalty = 0.9;
  if (auto it = config.find("lexicon.synonym_penalty"); it != config.end()) {
    penalty = io::parse_double(it->second, "lexicon.synonym_penalty");
  }

  Lexicon lex =
      lexicon_from_tsv(io::read_file(dir / "lexicon.tsv"),
                       (dir / "lexicon.tsv").string(), penalty);
  std::vector<std::string> stop_lines;
  for (std::string_view line :
       io::split_lines(io::read_file(dir / "stoplist.txt"))) {
    if (!line.empty()) stop_lines.emplace_back(line);
  }
  PriorStore priors = load_priors(dir / "priors");

  std::map<ConceptId, ConceptVector> vectors;
  std::size_t vector_dim = 0;
  if (meta.contains("counts") && meta["counts"].contains("vector_dim")) {
    vector_dim = meta["counts"]["vector_dim"].get<std::size_t>();
  }
  const fs::path vec_path = dir / "context" / "vectors.tsv";
  if (fs::exists(vec_path)) {
    vectors = concept_vectors_from_tsv(io::read_file(vec_path), vector_dim,
                                       vec_path.string());
  }

  CompiledResources res =
      compile(std::move(lex), stop_lines, std::move(priors),
              std::move(vectors), vector_dim, std::move(config));
  if (meta.contains("fingerprint") &&
      meta["fingerprint"].get<std::string>() != res.fingerprint) {
    throw ParseError(dir.string() +
                     ": bundle fingerprint mismatch (content was edited?)");
  }
  return res;
}

}  // namespace gazel
