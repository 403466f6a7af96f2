// Copyright 2026 The Memnet Authors.
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

#include "memnet/text.h"

#include <cctype>

namespace memnet {
namespace {

inline bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool IsAsciiPunct(unsigned char c) {
  return c < 0x80 && std::ispunct(c);
}

inline char AsciiLower(unsigned char c) {
  return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < n && !IsAsciiSpace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      size_t b = i;
      size_t e = j;
      while (b < e && IsAsciiPunct(static_cast<unsigned char>(text[b]))) ++b;
      while (e > b && IsAsciiPunct(static_cast<unsigned char>(text[e - 1])))
        --e;
      if (e > b) {
        std::string token;
        token.reserve(e - b);
        for (size_t k = b; k < e; ++k) {
          token.push_back(AsciiLower(static_cast<unsigned char>(text[k])));
        }
        tokens.push_back(std::move(token));
      }
    }
    i = j;
  }
  return tokens;
}

std::string NormalizeText(std::string_view text) {
  std::vector<std::string> tokens = Tokenize(text);
  return JoinTokens(tokens, 0, tokens.size());
}

std::string JoinTokens(std::span<const std::string> tokens, size_t begin,
                       size_t end) {
  std::string out;
  for (size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (i > begin) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  return SplitChar(line, '\t');
}

std::vector<std::string_view> SplitChar(std::string_view text, char delim) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(delim, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

bool IsCommentOrBlank(std::string_view line) {
  for (char c : line) {
    if (IsAsciiSpace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

}  // namespace memnet
