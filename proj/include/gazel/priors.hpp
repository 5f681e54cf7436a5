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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gazel/document.hpp"
#include "gazel/error.hpp"
#include "gazel/gold.hpp"
#include "gazel/ioutil.hpp"
#include "gazel/kb.hpp"
#include "gazel/text.hpp"
#include "gazel/utf8.hpp"

namespace gazel {

/// Context-free disambiguation evidence, joined into candidate entries at
/// compile time. All values are probabilities in [0,1].
struct PriorStore {
  std::map<ConceptId, double> concept_freq;
  std::map<std::pair<std::string, ConceptId>, double> link_prob;
  std::map<ConceptId, double> pagerank;

  bool operator==(const PriorStore&) const = default;
};

/// One raw co-occurrence record before filtering.
struct CoocRow {
  ConceptId a;
  ConceptId b;
  std::int64_t count = 0;
  int year = 0;
};

struct CoocEdge {
  std::int64_t count = 0;
  int year = 0;  // latest contributing year

  bool operator==(const CoocEdge&) const = default;
};

/// Undirected co-occurrence graph; edge keys are ordered (min, max) pairs.
struct CoocGraph {
  std::map<std::pair<ConceptId, ConceptId>, CoocEdge> edges;

  bool operator==(const CoocGraph&) const = default;

  std::vector<CoocRow> to_rows() const {
    std::vector<CoocRow> rows;
    rows.reserve(edges.size());
    for (const auto& [key, e] : edges) {
      rows.push_back({key.first, key.second, e.count, e.year});
    }
    return rows;
  }
};

/// TSV: cui1<TAB>cui2<TAB>count<TAB>year.
inline std::vector<CoocRow> cooc_rows_from_tsv(std::string_view content,
                                               const std::string& source) {
  std::vector<CoocRow> rows;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() != 4) throw ParseError(where + ": expected 4 columns");
    CoocRow row;
    row.a = ConceptId(std::string(cols[0]));
    row.b = ConceptId(std::string(cols[1]));
    row.count = io::parse_int(cols[2], where);
    if (row.count < 1) throw ParseError(where + ": count must be >= 1");
    row.year = static_cast<int>(io::parse_int(cols[3], where));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<CoocRow> load_cooc_rows(
    const std::filesystem::path& path) {
  return cooc_rows_from_tsv(io::read_file(path), path.string());
}

/// Keeps rows with year >= since_year and count >= min_count, drops
/// self-loops, and aggregates surviving rows per unordered pair.
inline CoocGraph filter_cooc(const std::vector<CoocRow>& rows,
                             std::int64_t min_count = 2,
                             int since_year = 2000) {
  if (min_count < 1) throw Error("filter_cooc: min_count must be >= 1");
  CoocGraph g;
  for (const CoocRow& row : rows) {
    if (row.year < since_year || row.count < min_count) continue;
    if (row.a == row.b) continue;
    auto key = row.a < row.b ? std::make_pair(row.a, row.b)
                             : std::make_pair(row.b, row.a);
    CoocEdge& e = g.edges[key];
    e.count += row.count;
    e.year = std::max(e.year, row.year);
  }
  return g;
}

struct PageRankResult {
  std::map<ConceptId, double> scores;  // sums to 1 over graph nodes
  bool converged = false;
  int iterations = 0;
};

// Static PageRank by power iteration over the undirected co-occurrence
// graph, using edge counts as weights (normalized per node, so uniform
// scaling of all counts changes nothing). Converges when the L1 change
// drops below tol; otherwise stops at max_iter with converged = false.
inline PageRankResult pagerank(const CoocGraph& graph, double damping = 0.85,
                               double tol = 1e-8, int max_iter = 100) {
  if (graph.edges.empty()) throw Error("pagerank: empty graph");
  if (!(damping > 0.0 && damping < 1.0)) {
    throw Error("pagerank: damping must be in (0,1)");
  }
  if (!(tol > 0.0)) throw Error("pagerank: tol must be positive");
  if (max_iter < 1) throw Error("pagerank: max_iter must be >= 1");

  std::map<ConceptId, std::size_t> index;
  for (const auto& [key, e] : graph.edges) {
    index.emplace(key.first, 0);
    index.emplace(key.second, 0);
  }
  std::size_t next = 0;
  for (auto& [id, idx] : index) idx = next++;
  const std::size_t n = index.size();

  struct Arc {
    std::size_t to;
    double weight;
  };
  std::vector<std::vector<Arc>> adj(n);
  std::vector<double> weight_sum(n, 0.0);
  for (const auto& [key, e] : graph.edges) {
    const std::size_t u = index[key.first];
    const std::size_t v = index[key.second];
    const auto w = static_cast<double>(e.count);
    adj[u].push_back({v, w});
    adj[v].push_back({u, w});
    weight_sum[u] += w;
    weight_sum[v] += w;
  }

  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  const double teleport = (1.0 - damping) / static_cast<double>(n);
  PageRankResult result;
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::fill(y.begin(), y.end(), teleport);
    for (std::size_t u = 0; u < n; ++u) {
      const double share = damping * x[u] / weight_sum[u];
      for (const Arc& arc : adj[u]) y[arc.to] += share * arc.weight;
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(y[i] - x[i]);
    const double total = std::accumulate(y.begin(), y.end(), 0.0);
    for (double& v : y) v /= total;
    x.swap(y);
    result.iterations = iter;
    if (l1 < tol) {
      result.converged = true;
      break;
    }
  }
  for (const auto& [id, idx] : index) result.scores[id] = x[idx];
  return result;
}

struct CorpusPriors {
  std::map<ConceptId, double> concept_freq;
  std::map<std::pair<std::string, ConceptId>, double> link_prob;
};

// Estimates concept frequencies and per-label link probabilities from a gold
// annotated corpus. Labels are the annotated text slices run through the
// same normalization as lexicon keys. Annotations carrying several valid
// cuis split their unit mass evenly so each distribution still sums to 1.
// With smoothing_k > 0, add-k smoothing is applied over the observed
// concept set.
inline CorpusPriors corpus_priors(const std::vector<Document>& docs,
                                  const std::vector<GoldDoc>& gold,
                                  double smoothing_k = 0.0) {
  std::map<std::string, const Document*> by_id;
  for (const Document& d : docs) by_id[d.id] = &d;

  std::map<ConceptId, double> concept_count;
  std::map<std::string, double> label_count;
  std::map<std::pair<std::string, ConceptId>, double> pair_count;
  std::map<std::string, std::set<ConceptId>> label_concepts;
  double total = 0.0;

  for (const GoldDoc& gd : gold) {
    auto it = by_id.find(gd.doc_id);
    if (it == by_id.end()) {
      throw Error("corpus_priors: no document text for '" + gd.doc_id + "'");
    }
    const std::u32string cps =
        utf8::decode_or_throw(it->second->text, gd.doc_id);
    for (const GoldAnnotation& a : gd.annotations) {
      if (a.end > cps.size()) {
        throw Error("corpus_priors: span out of range in '" + gd.doc_id +
                    "'");
      }
      const std::string label =
          normalize_label(utf8::encode(cps.substr(a.start, a.end - a.start)));
      const double unit = 1.0 / static_cast<double>(a.cuis.size());
      total += 1.0;
      label_count[label] += 1.0;
      for (const ConceptId& c : a.cuis) {
        concept_count[c] += unit;
        pair_count[{label, c}] += unit;
        label_concepts[label].insert(c);
      }
    }
  }
  if (total == 0.0) throw Error("corpus_priors: corpus has no annotations");

  CorpusPriors out;
  const double k = smoothing_k;
  const auto c_support = static_cast<double>(concept_count.size());
  for (const auto& [c, cnt] : concept_count) {
    out.concept_freq[c] = (cnt + k) / (total + k * c_support);
  }
  for (const auto& [key, cnt] : pair_count) {
    const double denom =
        label_count[key.first] +
        k * static_cast<double>(label_concepts[key.first].size());
    out.link_prob[key] = (cnt + k) / denom;
  }
  return out;
}

// ---- Priors bundle files ------------------------------------------------
// priors/concept_freq.tsv  cui<TAB>prob
// priors/link_prob.tsv     label<TAB>cui<TAB>prob
// priors/pagerank.tsv      cui<TAB>score
// All rows sorted lexicographically for byte-stable output.

inline std::string concept_scores_to_tsv(
    const std::map<ConceptId, double>& m) {
  std::string out;
  for (const auto& [id, v] : m) {
    out += io::tsv_escape(id.value());
    out += '\t';
    out += io::format_double(v);
    out += '\n';
  }
  return out;
}

inline std::map<ConceptId, double> concept_scores_from_tsv(
    std::string_view content, const std::string& source) {
  std::map<ConceptId, double> m;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() != 2) throw ParseError(where + ": expected 2 columns");
    ConceptId id(io::tsv_unescape(cols[0], where));
    if (!m.emplace(std::move(id), io::parse_double(cols[1], where)).second) {
      throw ParseError(where + ": duplicate cui");
    }
  }
  return m;
}

inline std::string link_prob_to_tsv(
    const std::map<std::pair<std::string, ConceptId>, double>& m) {
  std::string out;
  for (const auto& [key, v] : m) {
    out += io::tsv_escape(key.first);
    out += '\t';
    out += io::tsv_escape(key.second.value());
    out += '\t';
    out += io::format_double(v);
    out += '\n';
  }
  return out;
}

inline std::map<std::pair<std::string, ConceptId>, double> link_prob_from_tsv(
    std::string_view content, const std::string& source) {
  std::map<std::pair<std::string, ConceptId>, double> m;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() != 3) throw ParseError(where + ": expected 3 columns");
    std::string label = io::tsv_unescape(cols[0], where);
    ConceptId id(io::tsv_unescape(cols[1], where));
    const double v = io::parse_double(cols[2], where);
    if (!m.emplace(std::make_pair(std::move(label), std::move(id)), v)
             .second) {
      throw ParseError(where + ": duplicate (label, cui)");
    }
  }
  return m;
}

inline void save_priors(const PriorStore& priors,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_file(dir / "concept_freq.tsv",
                 concept_scores_to_tsv(priors.concept_freq));
  io::write_file(dir / "link_prob.tsv", link_prob_to_tsv(priors.link_prob));
  io::write_file(dir / "pagerank.tsv", concept_scores_to_tsv(priors.pagerank));
}

inline PriorStore load_priors(const std::filesystem::path& dir) {
  PriorStore p;
  const auto read = [&](const char* name) -> std::string {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) return {};
    return io::read_file(path);
  };
  p.concept_freq = concept_scores_from_tsv(read("concept_freq.tsv"),
                                           (dir / "concept_freq.tsv").string());
  p.link_prob =
      link_prob_from_tsv(read("link_prob.tsv"), (dir / "link_prob.tsv").string());
  p.pagerank = concept_scores_from_tsv(read("pagerank.tsv"),
                                       (dir / "pagerank.tsv").string());
  return p;
}

}  // namespace gazel
