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

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gazel/error.hpp"
#include "gazel/utf8.hpp"

namespace gazel::text {

/// Simple (one code point to one code point) lowercase mapping.
inline char32_t to_lower(char32_t cp) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

/// Word constituents for token-boundary checks: letters, digits, underscore.
inline bool is_word_char(char32_t cp) {
  return cp == U'_' || u_isalnum(static_cast<UChar32>(cp));
}

inline bool is_space(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

inline std::u32string lower(std::u32string s) {
  for (char32_t& cp : s) cp = to_lower(cp);
  return s;
}

inline std::string lower_utf8(std::string_view s) {
  return utf8::encode(lower(utf8::decode_or_throw(s)));
}

/// Unicode NFC normalization.
inline std::string nfc(std::string_view s) {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(ec);
  if (U_FAILURE(ec)) throw Error("ICU NFC instance unavailable");
  const icu::UnicodeString in =
      icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), s.size()));
  icu::UnicodeString out = norm->normalize(in, ec);
  if (U_FAILURE(ec)) throw ParseError("NFC normalization failed");
  std::string res;
  out.toUTF8String(res);
  return res;
}

/// A word token: lowercased text plus code-point offsets into the source.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Tokens are maximal runs of code points that are neither whitespace nor
// commas; other punctuation stays inside the token, so "(finding)" is one
// token and "neoplasm, pancreas" splits into two.
inline std::vector<Token> tokenize(const std::u32string& cps) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    while (i < n && (is_space(cps[i]) || cps[i] == U',')) ++i;
    if (i >= n) break;
    const std::size_t begin = i;
    std::string word;
    while (i < n && !is_space(cps[i]) && cps[i] != U',') {
      utf8::append(word, to_lower(cps[i]));
      ++i;
    }
    out.push_back(Token{std::move(word), begin, i});
  }
  return out;
}

inline std::vector<Token> tokenize(std::string_view s) {
  return tokenize(utf8::decode_or_throw(s));
}

/// Lowercased token texts only.
inline std::vector<std::string> tokenize_words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s)) out.push_back(std::move(t.text));
  return out;
}

}  // namespace gazel::text

namespace gazel {

/// Lexicon key normalization: NFC, then lowercase for labels of four or
/// more code points. Short labels stay case-sensitive so acronyms such as
/// "OD" do not match lowercase prose.
inline std::string normalize_label(std::string_view label) {
  const std::string composed = text::nfc(label);
  const std::u32string cps = utf8::decode_or_throw(composed, "label");
  if (cps.size() >= 4) return utf8::encode(text::lower(cps));
  return composed;
}

}  // namespace gazel
