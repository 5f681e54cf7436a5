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
#include <filesystem>
#include <iostream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gazel/error.hpp"
#include "gazel/ioutil.hpp"
#include "gazel/kb.hpp"
#include "gazel/text.hpp"

namespace gazel {

/// Pretrained word vectors in the plain-text format: a header line
/// "<vocab_size> <dim>" followed by one token and dim floats per line.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  const std::vector<double>* find(const std::string& token) const {
    auto it = vectors.find(token);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

inline EmbeddingTable embeddings_from_text(std::string_view content,
                                           const std::string& source) {
  EmbeddingTable table;
  const auto lines = io::split_lines(content);
  if (lines.empty()) throw ParseError(source + ": missing header line");
  {
    const auto head = io::split(lines[0], ' ');
    if (head.size() != 2) {
      throw ParseError(source + ":1: header must be '<vocab_size> <dim>'");
    }
    const auto vocab = io::parse_int(head[0], source + ":1");
    const auto dim = io::parse_int(head[1], source + ":1");
    if (vocab < 0 || dim <= 0) throw ParseError(source + ":1: bad header");
    table.dim = static_cast<std::size_t>(dim);
    table.vectors.reserve(static_cast<std::size_t>(vocab));
  }
  for (std::size_t lineno = 2; lineno <= lines.size(); ++lineno) {
    const std::string_view line = lines[lineno - 1];
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, ' ');
    if (cols.size() != table.dim + 1) {
      throw ParseError(where + ": expected " + std::to_string(table.dim) +
                       " values for token '" + std::string(cols[0]) + "'");
    }
    std::vector<double> vec(table.dim);
    for (std::size_t k = 0; k < table.dim; ++k) {
      vec[k] = io::parse_double(cols[k + 1], where);
    }
    std::string token(cols[0]);
    if (auto it = table.vectors.find(token); it != table.vectors.end()) {
      std::cerr << where << ": warning: duplicate token '" << token
                << "', last occurrence wins\n";
      it->second = std::move(vec);
    } else {
      table.vectors.emplace(std::move(token), std::move(vec));
    }
  }
  return table;
}

inline EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  return embeddings_from_text(io::read_file(path), path.string());
}

/// Additive representation of a concept: the sum of word vectors over its
/// definition text. token_count counts in-vocabulary tokens only.
struct ConceptVector {
  ConceptId concept;
  std::vector<double> vec;
  std::size_t token_count = 0;

  bool operator==(const ConceptVector&) const = default;
};

inline ConceptVector concept_vector(const Concept& concept,
                                    const EmbeddingTable& emb) {
  ConceptVector cv;
  cv.concept = concept.id;
  cv.vec.assign(emb.dim, 0.0);
  for (const std::string& token : text::tokenize_words(concept.definition)) {
    if (const auto* v = emb.find(token)) {
      for (std::size_t k = 0; k < emb.dim; ++k) cv.vec[k] += (*v)[k];
      ++cv.token_count;
    }
  }
  return cv;
}

/// Cosine similarity; 0.0 when either vector is zero (neutral evidence
/// rather than NaN). Result clamped to [-1, 1].
inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::max(-1.0, std::min(1.0, c));
}

/// Sums window-token vectors and compares against the concept vector.
inline double context_score(const std::vector<std::string>& window_tokens,
                            const ConceptVector& cvec,
                            const EmbeddingTable& emb) {
  std::vector<double> window(emb.dim, 0.0);
  for (const std::string& token : window_tokens) {
    if (const auto* v = emb.find(token)) {
      for (std::size_t k = 0; k < emb.dim; ++k) window[k] += (*v)[k];
    }
  }
  return cosine(window, cvec.vec);
}

/// context/vectors.tsv: cui<TAB>token_count<TAB>v1<TAB>...<TAB>vdim.
inline std::string concept_vectors_to_tsv(
    const std::map<ConceptId, ConceptVector>& vectors) {
  std::string out;
  for (const auto& [id, cv] : vectors) {
    out += io::tsv_escape(id.value());
    out += '\t';
    out += std::to_string(cv.token_count);
    for (double v : cv.vec) {
      out += '\t';
      out += io::format_double(v);
    }
    out += '\n';
  }
  return out;
}

inline std::map<ConceptId, ConceptVector> concept_vectors_from_tsv(
    std::string_view content, std::size_t dim, const std::string& source) {
  std::map<ConceptId, ConceptVector> out;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cols = io::split(line, '\t');
    if (cols.size() != dim + 2) {
      throw ParseError(where + ": expected " + std::to_string(dim + 2) +
                       " columns");
    }
    ConceptVector cv;
    cv.concept = ConceptId(io::tsv_unescape(cols[0], where));
    cv.token_count =
        static_cast<std::size_t>(io::parse_int(cols[1], where));
    cv.vec.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      cv.vec[k] = io::parse_double(cols[k + 2], where);
    }
    ConceptId id = cv.concept;
    if (!out.emplace(std::move(id), std::move(cv)).second) {
      throw ParseError(where + ": duplicate cui");
    }
  }
  return out;
}

}  // namespace gazel
