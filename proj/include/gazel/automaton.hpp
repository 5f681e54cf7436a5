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
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gazel/error.hpp"

namespace gazel {

// Aho-Corasick multi-pattern matcher over bytes. Patterns are added through
// the builder; matching reports every occurrence of every pattern, including
// overlaps. Immutable once built, safe for concurrent use.
class AhoCorasick {
 public:
  struct Match {
    std::size_t begin = 0;  // byte offsets, end exclusive
    std::size_t end = 0;
    std::uint32_t pattern = 0;
  };

  class Builder {
   public:
    /// Adds a pattern and returns its id; duplicates get the existing id.
    std::uint32_t add(std::string_view pattern) {
      if (pattern.empty()) throw Error("automaton: empty pattern");
      auto [it, inserted] = ids_.emplace(
          std::string(pattern), static_cast<std::uint32_t>(patterns_.size()));
      if (inserted) patterns_.emplace_back(pattern);
      return it->second;
    }

    AhoCorasick build() && {
      AhoCorasick ac;
      ac.patterns_ = std::move(patterns_);
      ac.nodes_.push_back({});  // root
      for (std::uint32_t pid = 0;
           pid < static_cast<std::uint32_t>(ac.patterns_.size()); ++pid) {
        std::uint32_t node = 0;
        for (unsigned char b : std::string_view(ac.patterns_[pid])) {
          std::uint32_t next = ac.transition(node, b);
          if (next == kNone) {
            next = static_cast<std::uint32_t>(ac.nodes_.size());
            ac.nodes_.push_back({});
            // Re-acquire the edge list: push_back may move nodes_.
            auto& edges = ac.nodes_[node].next;
            edges.insert(std::lower_bound(edges.begin(), edges.end(),
                                          std::make_pair(b, std::uint32_t{0})),
                         {b, next});
          }
          node = next;
        }
        ac.nodes_[node].terminal.push_back(pid);
      }
      ac.link_failures();
      return ac;
    }

   private:
    std::map<std::string, std::uint32_t> ids_;
    std::vector<std::string> patterns_;
  };

  std::vector<Match> find_all(std::string_view text) const {
    std::vector<Match> out;
    find(text, [&](const Match& m) { out.push_back(m); });
    return out;
  }

  template <class Fn>
  void find(std::string_view text, Fn&& emit) const {
    if (nodes_.empty()) return;
    std::uint32_t state = 0;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
      state = step(state, static_cast<unsigned char>(text[pos]));
      std::uint32_t n = state;
      while (n != 0) {
        for (std::uint32_t pid : nodes_[n].terminal) {
          emit(Match{pos + 1 - patterns_[pid].size(), pos + 1, pid});
        }
        n = nodes_[n].dict_link;
      }
    }
  }

  std::size_t pattern_count() const { return patterns_.size(); }
  const std::string& pattern(std::uint32_t id) const { return patterns_[id]; }

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  struct Node {
    std::vector<std::pair<unsigned char, std::uint32_t>> next;  // sorted
    std::uint32_t fail = 0;
    std::uint32_t dict_link = 0;  // nearest terminal node on the fail chain
    std::vector<std::uint32_t> terminal;
  };

  std::uint32_t transition(std::uint32_t node, unsigned char b) const {
    const auto& edges = nodes_[node].next;
    auto it = std::lower_bound(
        edges.begin(), edges.end(), b,
        [](const auto& e, unsigned char key) { return e.first < key; });
    if (it != edges.end() && it->first == b) return it->second;
    return kNone;
  }

  std::uint32_t step(std::uint32_t state, unsigned char b) const {
    while (true) {
      const std::uint32_t next = transition(state, b);
      if (next != kNone) return next;
      if (state == 0) return 0;
      state = nodes_[state].fail;
    }
  }

  void link_failures() {
    std::deque<std::uint32_t> queue;
    for (const auto& [b, child] : nodes_[0].next) {
      queue.push_back(child);  // fail and dict_link stay 0
    }
    while (!queue.empty()) {
      const std::uint32_t node = queue.front();
      queue.pop_front();
      const std::uint32_t fail = nodes_[node].fail;
      nodes_[node].dict_link =
          nodes_[fail].terminal.empty() ? nodes_[fail].dict_link : fail;
      for (const auto& [b, child] : nodes_[node].next) {
        nodes_[child].fail = step(fail, b);
        queue.push_back(child);
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<std::string> patterns_;
};

}  // namespace gazel
