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

#ifndef MEMNET_CORE_TEXT_H_
#define MEMNET_CORE_TEXT_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace memnet {

// Transparent hash so string-keyed containers accept string_view lookups
// without a temporary copy.
struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename T>
using StringMap = std::unordered_map<std::string, T, StringHash, std::equal_to<>>;
using StringSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

// Tokenizes text for question and alias processing: lowercase, split on
// whitespace, strip punctuation at token boundaries. Tokens that become
// empty after stripping are dropped. Bytes outside 7-bit ASCII pass through
// unchanged, so UTF-8 input is preserved byte for byte.
std::vector<std::string> Tokenize(std::string_view text);

// Canonical form used for alias keys and answer-string comparison:
// the tokens of Tokenize() joined by single spaces.
std::string NormalizeText(std::string_view text);

// Joins tokens[begin, end) with single spaces.
std::string JoinTokens(std::span<const std::string> tokens, size_t begin,
                       size_t end);

// Splits a line on tab characters. Empty fields are kept.
std::vector<std::string_view> SplitTabs(std::string_view line);

// Splits on a single-character delimiter. Empty pieces are kept.
std::vector<std::string_view> SplitChar(std::string_view text, char delim);

// True if the line is blank or a '#' comment (leading whitespace allowed).
bool IsCommentOrBlank(std::string_view line);

}  // namespace memnet

#endif  // MEMNET_CORE_TEXT_H_
