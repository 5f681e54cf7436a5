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
#include <compare>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gazel/error.hpp"
#include "gazel/ioutil.hpp"

namespace gazel {

/// Identifier of a knowledge-base concept. Non-empty, no whitespace;
/// comparison is exact byte equality.
class ConceptId {
 public:
  ConceptId() = default;
  explicit ConceptId(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw ParseError("concept id must be non-empty");
    for (unsigned char c : value_) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
          c == '\v') {
        throw ParseError("concept id '" + value_ + "' contains whitespace");
      }
    }
  }

  const std::string& value() const { return value_; }

  auto operator<=>(const ConceptId&) const = default;

 private:
  std::string value_;
};

/// One knowledge-base entry. The first label is the preferred name.
struct Concept {
  ConceptId id;
  std::vector<std::string> labels;  // deduplicated case-sensitively, ordered
  std::set<std::string> types;
  std::string definition;

  bool operator==(const Concept&) const = default;
};

class KnowledgeBase {
 public:
  /// Inserts a concept; duplicate ids are a hard error.
  void add(Concept c) {
    auto [it, inserted] = concepts_.emplace(c.id, std::move(c));
    if (!inserted) {
      throw ParseError("duplicate concept id " + it->first.value());
    }
  }

  const Concept* find(const ConceptId& id) const {
    auto it = concepts_.find(id);
    return it == concepts_.end() ? nullptr : &it->second;
  }

  const std::map<ConceptId, Concept>& concepts() const { return concepts_; }
  std::size_t size() const { return concepts_.size(); }
  bool empty() const { return concepts_.empty(); }

  bool operator==(const KnowledgeBase&) const = default;

 private:
  std::map<ConceptId, Concept> concepts_;
};

/// Semantic-type filter; an empty set allows everything.
struct TypeFilter {
  std::set<std::string> allowed;
};

namespace detail {

inline Concept concept_from_json(const nlohmann::json& j,
                                 const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": record is not an object");
  Concept c;
  if (!j.contains("cui") || !j["cui"].is_string()) {
    throw ParseError(where + ": missing string field 'cui'");
  }
  c.id = ConceptId(j["cui"].get<std::string>());
  if (!j.contains("labels") || !j["labels"].is_array() ||
      j["labels"].empty()) {
    throw ParseError(where + ": 'labels' must be a non-empty array");
  }
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) throw ParseError(where + ": label is not a string");
    std::string s = l.get<std::string>();
    if (s.empty()) throw ParseError(where + ": empty label");
    if (std::find(c.labels.begin(), c.labels.end(), s) == c.labels.end()) {
      c.labels.push_back(std::move(s));
    }
  }
  if (j.contains("types")) {
    if (!j["types"].is_array()) {
      throw ParseError(where + ": 'types' must be an array");
    }
    for (const auto& t : j["types"]) {
      if (!t.is_string()) throw ParseError(where + ": type is not a string");
      std::string s = t.get<std::string>();
      if (s.empty()) throw ParseError(where + ": empty semantic type");
      c.types.insert(std::move(s));
    }
  }
  if (j.contains("definition")) {
    if (!j["definition"].is_string()) {
      throw ParseError(where + ": 'definition' must be a string");
    }
    c.definition = j["definition"].get<std::string>();
  }
  return c;
}

inline nlohmann::json concept_to_json(const Concept& c) {
  nlohmann::json j;
  j["cui"] = c.id.value();
  j["labels"] = c.labels;
  j["types"] = c.types;
  j["definition"] = c.definition;
  return j;
}

}  // namespace detail

/// Parses one-concept-per-line JSON. `source` names the input in errors.
inline KnowledgeBase kb_from_jsonl(std::string_view content,
                                   const std::string& source) {
  KnowledgeBase kb;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(where + ": invalid JSON");
    kb.add(detail::concept_from_json(j, where));
  }
  return kb;
}

inline std::string kb_to_jsonl(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& [id, c] : kb.concepts()) {
    out += detail::concept_to_json(c).dump();
    out += '\n';
  }
  return out;
}

inline KnowledgeBase load_kb(const std::filesystem::path& path) {
  return kb_from_jsonl(io::read_file(path), path.string());
}

inline void save_kb(const KnowledgeBase& kb,
                    const std::filesystem::path& path) {
  io::write_file(path, kb_to_jsonl(kb));
}

/// Keeps exactly the concepts whose type set intersects `filter.allowed`
/// (all concepts when the filter is empty). Surviving concepts are copied
/// unmodified.
inline KnowledgeBase apply_type_filter(const KnowledgeBase& kb,
                                       const TypeFilter& filter) {
  if (filter.allowed.empty()) return kb;
  KnowledgeBase out;
  for (const auto& [id, c] : kb.concepts()) {
    const bool keep = std::any_of(
        c.types.begin(), c.types.end(),
        [&](const std::string& t) { return filter.allowed.contains(t); });
    if (keep) out.add(c);
  }
  return out;
}

}  // namespace gazel
