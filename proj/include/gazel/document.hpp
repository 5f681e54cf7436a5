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

namespace gazel {

/// A unit of input text. Annotation offsets are Unicode scalar-value
/// indices into `text`.
struct Document {
  std::string id;
  std::string text;

  bool operator==(const Document&) const = default;
};

/// Parses JSON lines of the form {"id": ..., "text": ...}.
inline std::vector<Document> documents_from_jsonl(std::string_view content,
                                                  const std::string& source) {
  std::vector<Document> docs;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(content)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError(where + ": invalid JSON");
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("text") || !j["text"].is_string()) {
      throw ParseError(where + ": expected object with string 'id', 'text'");
    }
    docs.push_back({j["id"].get<std::string>(), j["text"].get<std::string>()});
  }
  return docs;
}

/// Loads documents from a `.jsonl` file, from a directory (each regular file
/// becomes one document whose id is the filename stem, sorted by name), or
/// from a single plain-text file.
inline std::vector<Document> load_documents(
    const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    for (const auto& f : files) {
      Document d{f.stem().string(), io::read_file(f)};
      for (const auto& other : docs) {
        if (other.id == d.id) {
          throw Error("duplicate document id '" + d.id + "' under " +
                      path.string());
        }
      }
      docs.push_back(std::move(d));
    }
    return docs;
  }
  if (path.extension() == ".jsonl") {
    return documents_from_jsonl(io::read_file(path), path.string());
  }
  return {Document{path.stem().string(), io::read_file(path)}};
}

}  // namespace gazel
