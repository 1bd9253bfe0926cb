// Copyright 2026 The Interview Eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by seed preparation, grading and analysis.
namespace interview::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
// Trims and collapses every whitespace run to a single space.
std::string collapse_whitespace(std::string_view s);
// Case-insensitive, whitespace-normalized equality.
bool same_text(std::string_view a, std::string_view b);

std::size_t whitespace_token_count(std::string_view s);

// True when `needle` occurs in `haystack` without an alphanumeric character
// directly before or after it. Empty needles never match.
bool contains_term(std::string_view haystack, std::string_view needle, bool case_sensitive = true);

struct Token {
  std::string text;
  std::size_t offset = 0;
  bool numeric = false;
};

// Splits into numeric literals, words and single punctuation characters.
// Numeric literals cover integers, decimals, thousands-grouped integers,
// simple fractions such as 3/4 and LaTeX \frac{a}{b} / \dfrac{a}{b}.
std::vector<Token> tokenize(std::string_view s);

std::vector<Token> numeric_literals(std::string_view s);

// "\frac{3}{4}" -> "3/4", "1,000" -> "1000"; other literals unchanged.
std::string canonical_number(std::string_view literal);

struct DiffHunk {
  std::size_t a_begin, a_end;  // deleted tokens of a: [a_begin, a_end)
  std::size_t b_begin, b_end;  // inserted tokens of b
};

// Maximal runs of non-matching tokens between two token sequences, from a
// longest-common-subsequence alignment compared by token text.
std::vector<DiffHunk> diff(const std::vector<Token>& a, const std::vector<Token>& b);

// Sentences split on '.', '!', '?' followed by whitespace, and on newlines.
std::vector<std::string> sentences(std::string_view s);

// Normalization used by the exact-match fast path: takes the last \boxed{}
// argument when present, strips '$', spaces and a trailing period, lowercases.
std::string normalize_answer(std::string_view s);

}  // namespace interview::text
