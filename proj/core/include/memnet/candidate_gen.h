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

#ifndef MEMNET_CORE_CANDIDATE_GEN_H_
#define MEMNET_CORE_CANDIDATE_GEN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memnet/kb_store.h"
#include "memnet/text.h"

namespace memnet {

// Token filter lists for n-gram generation. The stopword list only
// suppresses single-token spans; the interrogative list suppresses every
// span containing one of its words.
struct WordLists {
  StringSet stopwords;
  StringSet interrogatives;

  // Built-in English lists, identical to the data files shipped with the
  // project (data/stopwords.txt, data/interrogatives.txt).
  static const WordLists& Defaults();
};

// Plain-text word list, one word per line, '#' comments allowed. Words are
// normalized on load.
StringSet LoadWordList(const std::string& path);

// A contiguous token span [begin, end) of the normalized question.
struct QuestionNgram {
  uint32_t begin = 0;
  uint32_t end = 0;
  std::string text;  // tokens joined by single spaces

  uint32_t length() const { return end - begin; }
  bool operator==(const QuestionNgram&) const = default;
};

// An n-gram whose text is an alias key, with the entities carrying it.
struct NgramMatch {
  QuestionNgram ngram;
  std::vector<EntityId> entities;
  bool operator==(const NgramMatch&) const = default;
};

// Candidate facts for answering one question. Fact indexes refer to the
// store the set was generated from.
struct CandidateSet {
  std::vector<EntityId> entities;
  std::vector<uint32_t> fact_indices;
};

// All contiguous token spans of the normalized question, minus spans
// containing an interrogative word and minus single-token spans whose token
// is a stopword. Ordered by decreasing length, ties left to right.
std::vector<QuestionNgram> GenerateNgrams(std::string_view question,
                                          const WordLists& lists);

// Keeps n-grams that match an alias key, then discards every match whose
// span is a strict contiguous sub-span of another match, except that the
// shorter survives when the longer differs only by a leading "in", "of",
// "for" or "the". Input order is preserved.
std::vector<NgramMatch> MatchAliases(std::span<const QuestionNgram> ngrams,
                                     const AliasIndex& aliases);

// From the five longest matches (ties left to right, then by text), takes
// per match the two entities of highest degree (ties by symbol order).
// The result keeps first-seen order and is deduplicated.
std::vector<EntityId> SelectEntities(std::span<const NgramMatch> matches,
                                     const GroupedFactStore& store);

// All grouped facts whose subject is one of the entities. Facts are ordered
// by the position of their subject in the entity list, then by relationship
// symbol order.
CandidateSet CandidateFacts(std::span<const EntityId> entities,
                            const GroupedFactStore& store);

// Full pipeline: n-grams, alias matching, entity selection, fact lookup.
CandidateSet GenerateCandidates(std::string_view question,
                                const GroupedFactStore& store,
                                const AliasIndex& aliases,
                                const WordLists& lists);

}  // namespace memnet

#endif  // MEMNET_CORE_CANDIDATE_GEN_H_
