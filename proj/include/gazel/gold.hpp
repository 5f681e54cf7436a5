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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gazel/error.hpp"
#include "gazel/ioutil.hpp"
#include "gazel/kb.hpp"

namespace gazel {

/// A gold mention: span plus every concept id accepted as correct.
struct GoldAnnotation {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<ConceptId> cuis;  // nonempty, sorted, unique

  bool operator==(const GoldAnnotation&) const = default;
};

struct GoldDoc {
  std::string doc_id;
  std::vector<GoldAnnotation> annotations;  // sorted by (start, end)

  bool operator==(const GoldDoc&) const = default;
};

/// JSON lines: {"doc_id": ..., "annotations": [{"start", "end", "cuis"}]}.
inline std::vector<GoldDoc> gold_from_jsonl(std::string_view content,
                                            const std::string& source) {
  std::vector<GoldDoc> out;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(where + ": invalid JSON");
    if (!j.is_object() || !j.contains("doc_id") || !j["doc_id"].is_string()) {
      throw ParseError(where + ": missing string field 'doc_id'");
    }
    GoldDoc doc;
    doc.doc_id = j["doc_id"].get<std::string>();
    if (j.contains("annotations")) {
      if (!j["annotations"].is_array()) {
        throw ParseError(where + ": 'annotations' must be an array");
      }
      for (const auto& a : j["annotations"]) {
        GoldAnnotation g;
        if (!a.is_object() || !a.contains("start") || !a.contains("end") ||
            !a["start"].is_number_unsigned() ||
            !a["end"].is_number_unsigned()) {
          throw ParseError(where + ": annotation needs numeric start/end");
        }
        g.start = a["start"].get<std::size_t>();
        g.end = a["end"].get<std::size_t>();
        if (g.start >= g.end) throw ParseError(where + ": empty span");
        if (!a.contains("cuis") || !a["cuis"].is_array() ||
            a["cuis"].empty()) {
          throw ParseError(where + ": 'cuis' must be a non-empty array");
        }
        for (const auto& c : a["cuis"]) {
          if (!c.is_string()) throw ParseError(where + ": cui not a string");
          g.cuis.emplace_back(c.get<std::string>());
        }
        std::sort(g.cuis.begin(), g.cuis.end());
        g.cuis.erase(std::unique(g.cuis.begin(), g.cuis.end()), g.cuis.end());
        doc.annotations.push_back(std::move(g));
      }
    }
    std::sort(doc.annotations.begin(), doc.annotations.end(),
              [](const GoldAnnotation& a, const GoldAnnotation& b) {
                return std::tie(a.start, a.end) < std::tie(b.start, b.end);
              });
    out.push_back(std::move(doc));
  }
  return out;
}

inline std::vector<GoldDoc> load_gold(const std::filesystem::path& path) {
  return gold_from_jsonl(io::read_file(path), path.string());
}

inline std::string gold_to_jsonl(const std::vector<GoldDoc>& docs) {
  std::string out;
  for (const GoldDoc& d : docs) {
    nlohmann::json j;
    j["doc_id"] = d.doc_id;
    j["annotations"] = nlohmann::json::array();
    for (const GoldAnnotation& a : d.annotations) {
      nlohmann::json ja;
      ja["start"] = a.start;
      ja["end"] = a.end;
      auto cuis = nlohmann::json::array();
      for (const ConceptId& c : a.cuis) cuis.push_back(c.value());
      ja["cuis"] = std::move(cuis);
      j["annotations"].push_back(std::move(ja));
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline void save_gold(const std::vector<GoldDoc>& docs,
                      const std::filesystem::path& path) {
  io::write_file(path, gold_to_jsonl(docs));
}

}  // namespace gazel
