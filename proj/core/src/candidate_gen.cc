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

#include "memnet/candidate_gen.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <tuple>

namespace memnet {
namespace {

constexpr std::string_view kStopwords[] = {
    "a",          "about",   "above",      "after",   "again",    "against",
    "all",        "am",      "an",         "and",     "any",      "are",
    "as",         "at",      "be",         "because", "been",     "before",
    "being",      "below",   "between",    "both",    "but",      "by",
    "can",        "could",   "did",        "do",      "does",     "doing",
    "down",       "during",  "each",       "few",     "from",     "further",
    "had",        "has",     "have",       "having",  "he",       "her",
    "here",       "hers",    "herself",    "him",     "himself",  "his",
    "i",          "if",      "in",         "into",    "is",       "it",
    "its",        "itself",  "just",       "me",      "more",     "most",
    "my",         "myself",  "no",         "nor",     "not",      "now",
    "of",         "off",     "on",         "once",    "only",     "or",
    "other",      "our",     "ours",       "ourselves", "out",    "over",
    "own",        "same",    "she",        "should",  "so",       "some",
    "such",       "than",    "that",       "the",     "their",    "theirs",
    "them",       "themselves", "then",    "there",   "these",    "they",
    "this",       "those",   "through",    "to",      "too",      "under",
    "until",      "up",      "very",       "was",     "we",       "were",
    "while",      "will",    "with",       "would",   "you",      "your",
    "yours",      "yourself", "yourselves",
};

constexpr std::string_view kInterrogatives[] = {
    "what", "who", "whom", "whose", "which", "where", "when", "why", "how",
};

constexpr std::string_view kLeadingExceptions[] = {"in", "of", "for", "the"};

bool IsLeadingException(std::string_view token) {
  for (std::string_view w : kLeadingExceptions) {
    if (token == w) return true;
  }
  return false;
}

}  // namespace

const WordLists& WordLists::Defaults() {
  static const WordLists* lists = [] {
    auto* l = new WordLists();
    for (std::string_view w : kStopwords) l->stopwords.insert(std::string(w));
    for (std::string_view w : kInterrogatives) {
      l->interrogatives.insert(std::string(w));
    }
    return l;
  }();
  return *lists;
}

StringSet LoadWordList(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  StringSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    std::string word = NormalizeText(line);
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

std::vector<QuestionNgram> GenerateNgrams(std::string_view question,
                                          const WordLists& lists) {
  std::vector<std::string> tokens = Tokenize(question);
  const uint32_t n = static_cast<uint32_t>(tokens.size());

  std::vector<bool> interrogative(n, false);
  for (uint32_t i = 0; i < n; ++i) {
    interrogative[i] = lists.interrogatives.count(tokens[i]) > 0;
  }

  std::vector<QuestionNgram> ngrams;
  for (uint32_t len = n; len >= 1; --len) {
    for (uint32_t begin = 0; begin + len <= n; ++begin) {
      uint32_t end = begin + len;
      bool blocked = false;
      for (uint32_t k = begin; k < end; ++k) {
        if (interrogative[k]) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      if (len == 1 && lists.stopwords.count(tokens[begin]) > 0) continue;
      ngrams.push_back(
          QuestionNgram{begin, end, JoinTokens(tokens, begin, end)});
    }
  }
  return ngrams;
}

std::vector<NgramMatch> MatchAliases(std::span<const QuestionNgram> ngrams,
                                     const AliasIndex& aliases) {
  std::vector<NgramMatch> matched;
  for (const QuestionNgram& g : ngrams) {
    std::span<const EntityId> entities = aliases.LookupNormalized(g.text);
    if (entities.empty()) continue;
    matched.push_back(
        NgramMatch{g, std::vector<EntityId>(entities.begin(), entities.end())});
  }

  // A match dies when another matched span strictly contains it, unless the
  // longer span only adds a leading "in", "of", "for" or "the".
  auto first_token = [](const NgramMatch& m) {
    size_t pos = m.ngram.text.find(' ');
    return std::string_view(m.ngram.text).substr(0, pos);
  };
  std::vector<NgramMatch> kept;
  for (const NgramMatch& m : matched) {
    bool dead = false;
    for (const NgramMatch& other : matched) {
      bool strict_super = other.ngram.begin <= m.ngram.begin &&
                          m.ngram.end <= other.ngram.end &&
                          other.ngram.length() > m.ngram.length();
      if (!strict_super) continue;
      bool leading_only = other.ngram.end == m.ngram.end &&
                          other.ngram.begin + 1 == m.ngram.begin &&
                          IsLeadingException(first_token(other));
      if (!leading_only) {
        dead = true;
        break;
      }
    }
    if (!dead) kept.push_back(m);
  }
  return kept;
}

std::vector<EntityId> SelectEntities(std::span<const NgramMatch> matches,
                                     const GroupedFactStore& store) {
  std::vector<const NgramMatch*> order;
  order.reserve(matches.size());
  for (const NgramMatch& m : matches) order.push_back(&m);
  std::sort(order.begin(), order.end(),
            [](const NgramMatch* a, const NgramMatch* b) {
              return std::tuple(-static_cast<int64_t>(a->ngram.length()),
                                a->ngram.begin,
                                std::string_view(a->ngram.text)) <
                     std::tuple(-static_cast<int64_t>(b->ngram.length()),
                                b->ngram.begin,
                                std::string_view(b->ngram.text));
            });
  if (order.size() > 5) order.resize(5);

  std::vector<EntityId> selected;
  std::vector<EntityId> ranked;
  for (const NgramMatch* m : order) {
    ranked.assign(m->entities.begin(), m->entities.end());
    std::sort(ranked.begin(), ranked.end(), [&](EntityId a, EntityId b) {
      size_t da = store.EntityDegree(a);
      size_t db = store.EntityDegree(b);
      if (da != db) return da > db;
      return store.SymbolOf(a) < store.SymbolOf(b);
    });
    if (ranked.size() > 2) ranked.resize(2);
    for (EntityId e : ranked) {
      if (std::find(selected.begin(), selected.end(), e) == selected.end()) {
        selected.push_back(e);
      }
    }
  }
  return selected;
}

CandidateSet CandidateFacts(std::span<const EntityId> entities,
                            const GroupedFactStore& store) {
  CandidateSet set;
  for (EntityId e : entities) {
    if (std::find(set.entities.begin(), set.entities.end(), e) !=
        set.entities.end()) {
      continue;
    }
    set.entities.push_back(e);

    std::span<const uint32_t> indices = store.FactsWithSubject(e);
    std::vector<uint32_t> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end(), [&](uint32_t a, uint32_t b) {
      return store.SymbolOf(store.fact(a).relationship) <
             store.SymbolOf(store.fact(b).relationship);
    });
    for (uint32_t idx : sorted) {
      if (std::find(set.fact_indices.begin(), set.fact_indices.end(), idx) ==
          set.fact_indices.end()) {
        set.fact_indices.push_back(idx);
      }
    }
  }
  return set;
}

CandidateSet GenerateCandidates(std::string_view question,
                                const GroupedFactStore& store,
                                const AliasIndex& aliases,
                                const WordLists& lists) {
  std::vector<QuestionNgram> ngrams = GenerateNgrams(question, lists);
  std::vector<NgramMatch> matches = MatchAliases(ngrams, aliases);
  std::vector<EntityId> entities = SelectEntities(matches, store);
  return CandidateFacts(entities, store);
}

}  // namespace memnet
