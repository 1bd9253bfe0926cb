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

#include "interview/text.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace interview::text {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::size_t scan_digits(std::string_view s, std::size_t i) {
  while (i < s.size() && is_digit(s[i])) ++i;
  return i;
}

// Length of "{digits}" at i, or 0.
std::size_t braced_digits(std::string_view s, std::size_t i) {
  if (i >= s.size() || s[i] != '{') return 0;
  const std::size_t end = scan_digits(s, i + 1);
  if (end == i + 1 || end >= s.size() || s[end] != '}') return 0;
  return end + 1 - i;
}

// Length of a \frac{a}{b} or \dfrac{a}{b} literal starting at i, or 0.
std::size_t latex_fraction(std::string_view s, std::size_t i) {
  for (std::string_view head : {std::string_view("\\frac"), std::string_view("\\dfrac"),
                                std::string_view("\\tfrac")}) {
    if (s.substr(i, head.size()) != head) continue;
    std::size_t j = i + head.size();
    const std::size_t num = braced_digits(s, j);
    if (num == 0) return 0;
    const std::size_t den = braced_digits(s, j + num);
    if (den == 0) return 0;
    return head.size() + num + den;
  }
  return 0;
}

// Length of a plain numeric literal starting at i (s[i] is a digit).
std::size_t plain_number(std::string_view s, std::size_t i) {
  std::size_t j = scan_digits(s, i);
  // Thousands grouping: 1,000 or 12,345,678.
  if (j - i <= 3) {
    std::size_t k = j;
    while (k + 4 <= s.size() && s[k] == ',' && is_digit(s[k + 1]) && is_digit(s[k + 2]) && is_digit(s[k + 3]) &&
           (k + 4 == s.size() || !is_digit(s[k + 4]))) {
      k += 4;
    }
    j = k;
  }
  if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) j = scan_digits(s, j + 1);
  if (j + 1 < s.size() && s[j] == '/' && is_digit(s[j + 1])) {
    j = scan_digits(s, j + 1);
    if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) j = scan_digits(s, j + 1);
  }
  return j - i;
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

bool same_text(std::string_view a, std::string_view b) {
  return to_lower(collapse_whitespace(a)) == to_lower(collapse_whitespace(b));
}

std::size_t whitespace_token_count(std::string_view s) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : s) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

bool contains_term(std::string_view haystack, std::string_view needle, bool case_sensitive) {
  needle = trim(needle);
  if (needle.empty()) return false;
  std::string h_lower;
  std::string n_lower;
  if (!case_sensitive) {
    h_lower = to_lower(haystack);
    n_lower = to_lower(needle);
    haystack = h_lower;
    needle = n_lower;
  }
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    const bool left_ok = pos == 0 || !is_alnum(haystack[pos - 1]) || !is_alnum(needle.front());
    const std::size_t end = pos + needle.size();
    const bool right_ok =
        end == haystack.size() || !is_alnum(haystack[end]) || !is_alnum(needle.back());
    // "1.5" must not match inside "11.5" or "1.55"; a trailing '.' as
    // sentence punctuation is fine.
    const bool decimal_ok = !(end + 1 < haystack.size() && haystack[end] == '.' &&
                              is_digit(haystack[end + 1]) && is_digit(needle.back())) &&
                            !(pos >= 2 && haystack[pos - 1] == '.' &&
                              is_digit(haystack[pos - 2]) && is_digit(needle.front()));
    if (left_ok && right_ok && decimal_ok) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '\\') {
      if (const std::size_t n = latex_fraction(s, i)) {
        tokens.push_back({std::string(s.substr(i, n)), i, true});
        i += n;
        continue;
      }
    }
    if (is_digit(c)) {
      const std::size_t n = plain_number(s, i);
      tokens.push_back({std::string(s.substr(i, n)), i, true});
      i += n;
      continue;
    }
    if (is_alpha(c)) {
      std::size_t j = i;
      while (j < s.size() && is_alpha(s[j])) ++j;
      tokens.push_back({std::string(s.substr(i, j - i)), i, false});
      i = j;
      continue;
    }
    // Multi-byte UTF-8 sequences stay together as one token.
    std::size_t len = 1;
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0xF0) {
      len = 4;
    } else if (u >= 0xE0) {
      len = 3;
    } else if (u >= 0xC0) {
      len = 2;
    }
    len = std::min(len, s.size() - i);
    tokens.push_back({std::string(s.substr(i, len)), i, false});
    i += len;
  }
  return tokens;
}

std::vector<Token> numeric_literals(std::string_view s) {
  std::vector<Token> out;
  for (Token& t : tokenize(s)) {
    if (t.numeric) out.push_back(std::move(t));
  }
  return out;
}

std::string canonical_number(std::string_view literal) {
  if (!literal.empty() && literal.front() == '\\') {
    const auto open1 = literal.find('{');
    const auto close1 = literal.find('}', open1);
    const auto open2 = literal.find('{', close1);
    const auto close2 = literal.find('}', open2);
    return std::string(literal.substr(open1 + 1, close1 - open1 - 1)) + "/" +
           std::string(literal.substr(open2 + 1, close2 - open2 - 1));
  }
  std::string out;
  for (char c : literal) {
    if (c != ',') out.push_back(c);
  }
  return out;
}

std::vector<DiffHunk> diff(const std::vector<Token>& a, const std::vector<Token>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // lcs[i][j] = LCS length of a[i..] and b[j..].
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i].text == b[j].text ? lcs[i + 1][j + 1] + 1
                                         : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  std::vector<DiffHunk> hunks;
  std::size_t i = 0;
  std::size_t j = 0;
  std::optional<DiffHunk> open;
  auto close = [&] {
    if (open) {
      open->a_end = i;
      open->b_end = j;
      hunks.push_back(*open);
      open.reset();
    }
  };
  while (i < n || j < m) {
    if (i < n && j < m && a[i].text == b[j].text && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
      close();
      ++i;
      ++j;
      continue;
    }
    if (!open) open = DiffHunk{i, i, j, j};
    if (j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j])) {
      ++j;
    } else {
      ++i;
    }
  }
  close();
  return hunks;
}

std::vector<std::string> sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string t(trim(current));
    if (!t.empty()) out.push_back(std::move(t));
    current.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current.push_back(c);
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == s.size() || is_space(s[i + 1]))) {
      flush();
    }
  }
  flush();
  return out;
}

std::string normalize_answer(std::string_view s) {
  std::string_view body = s;
  const auto boxed = s.rfind("\\boxed{");
  if (boxed != std::string_view::npos) {
    std::size_t depth = 0;
    const std::size_t start = boxed + 7;
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] == '{') ++depth;
      if (s[i] == '}') {
        if (depth == 0) {
          body = s.substr(start, i - start);
          break;
        }
        --depth;
      }
    }
  }
  std::string out;
  for (char c : body) {
    if (c == '$' || is_space(c)) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

}  // namespace interview::text
