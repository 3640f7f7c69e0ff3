// Copyright 2026 The Folio Authors.
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
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "folio/error.hpp"

// Small byte-oriented string helpers. Non-ASCII bytes are treated as
// letters and never case-folded.
namespace folio::text {

inline bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_word_byte(char c) {
  return is_ascii_upper(c) || is_ascii_lower(c) || is_ascii_digit(c) ||
         static_cast<unsigned char>(c) >= 0x80;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_ascii_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline std::string capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty() && is_ascii_lower(out[0])) {
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Splits on runs of spaces/tabs, dropping empty pieces.
inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline bool starts_with(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

inline bool ends_with(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

inline bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), is_word_byte);
}

// True for tokens like "AI", "KA", "NLP": two or more ASCII letters, all upper.
inline bool is_all_caps_word(std::string_view s) {
  return s.size() >= 2 && std::all_of(s.begin(), s.end(), is_ascii_upper);
}

// English plural stripping; returns the input unchanged when no rule applies.
inline std::string singularize(std::string_view w) {
  std::string s(w);
  if (s.size() <= 3) return s;
  if (ends_with(s, "ss") || ends_with(s, "us") || ends_with(s, "is")) return s;
  if (ends_with(s, "ies")) return s.substr(0, s.size() - 3) + "y";
  if (ends_with(s, "ches") || ends_with(s, "shes") || ends_with(s, "xes") ||
      ends_with(s, "zes") || ends_with(s, "sses")) {
    return s.substr(0, s.size() - 2);
  }
  if (ends_with(s, "s")) return s.substr(0, s.size() - 1);
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path);
}

// Reads "key = value" lines; '#' starts a comment line. Later keys win.
inline std::vector<std::pair<std::string, std::string>> parse_key_values(
    std::string_view content, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kBadConfig,
                  origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    out.emplace_back(std::string(trim(line.substr(0, eq))),
                     std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

}  // namespace folio::text
