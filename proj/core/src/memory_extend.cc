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

#include "memnet/memory_extend.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "memnet/text.h"

namespace memnet {

std::vector<ExternalFactInput> LoadExternalFacts(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::vector<ExternalFactInput> facts;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected subject<TAB>relation<TAB>object");
    }
    facts.push_back(ExternalFactInput{std::string(fields[0]),
                                      std::string(fields[1]),
                                      std::string(fields[2])});
  }
  return facts;
}

std::optional<EntityId> LinkEntity(std::string_view text,
                                   const AliasIndex& aliases,
                                   const GroupedFactStore& store) {
  std::span<const EntityId> entities = aliases.Lookup(text);
  if (entities.empty()) return std::nullopt;
  EntityId best = entities.front();
  for (size_t i = 1; i < entities.size(); ++i) {
    EntityId e = entities[i];
    size_t de = store.EntityDegree(e);
    size_t db = store.EntityDegree(best);
    if (de > db ||
        (de == db && store.SymbolOf(e) < store.SymbolOf(best))) {
      best = e;
    }
  }
  return best;
}

ExternalStore AddExternalFacts(std::span<const ExternalFactInput> inputs,
                               const GroupedFactStore& store,
                               const AliasIndex& aliases,
                               const SymbolTable& symbols,
                               const VocabTable& vocab) {
  ExternalStore external;
  external.stats_.facts = inputs.size();
  external.facts_.reserve(inputs.size());

  for (uint32_t idx = 0; idx < inputs.size(); ++idx) {
    const ExternalFactInput& input = inputs[idx];
    ExternalFact fact;
    fact.input = input;
    fact.subject_link = LinkEntity(input.subject, aliases, store);
    fact.object_link = LinkEntity(input.object, aliases, store);
    if (fact.subject_link.has_value()) ++external.stats_.linked_subjects;
    if (fact.object_link.has_value()) ++external.stats_.linked_objects;
    fact.encoding =
        EncodeExternalFact(input.subject, fact.subject_link, input.relation,
                           input.object, fact.object_link, symbols, vocab);

    for (std::string_view piece :
         {std::string_view(input.subject), std::string_view(input.relation),
          std::string_view(input.object)}) {
      for (std::string& token : Tokenize(piece)) {
        std::vector<uint32_t>& list = external.by_word_[std::move(token)];
        if (list.empty() || list.back() != idx) list.push_back(idx);
      }
    }
    if (fact.subject_link.has_value()) {
      std::vector<uint32_t>& list =
          external.by_entity_[fact.subject_link->value];
      if (list.empty() || list.back() != idx) list.push_back(idx);
    }
    if (fact.object_link.has_value()) {
      std::vector<uint32_t>& list =
          external.by_entity_[fact.object_link->value];
      if (list.empty() || list.back() != idx) list.push_back(idx);
    }
    external.facts_.push_back(std::move(fact));
  }
  return external;
}

std::span<const uint32_t> ExternalStore::FactsWithWord(
    std::string_view word) const {
  auto it = by_word_.find(word);
  if (it == by_word_.end()) return {};
  return it->second;
}

std::span<const uint32_t> ExternalStore::FactsWithEntity(
    EntityId entity) const {
  auto it = by_entity_.find(entity.value);
  if (it == by_entity_.end()) return {};
  return it->second;
}

std::vector<uint32_t> ExternalCandidates(std::string_view question,
                                         const ExternalStore& external,
                                         const GroupedFactStore& store,
                                         const AliasIndex& aliases,
                                         const WordLists& lists,
                                         size_t limit) {
  // Entity channel: entities selected by the question's alias matches.
  std::vector<QuestionNgram> ngrams = GenerateNgrams(question, lists);
  std::vector<NgramMatch> matches = MatchAliases(ngrams, aliases);
  std::vector<EntityId> entities = SelectEntities(matches, store);

  // Word channel: content words of the question.
  std::vector<std::string> tokens = Tokenize(question);
  StringSet content;
  for (std::string& t : tokens) {
    if (lists.stopwords.count(t) == 0 && lists.interrogatives.count(t) == 0) {
      content.insert(std::move(t));
    }
  }

  std::unordered_map<uint32_t, size_t> entity_overlap;
  for (EntityId e : entities) {
    for (uint32_t idx : external.FactsWithEntity(e)) {
      ++entity_overlap[idx];
    }
  }
  std::unordered_map<uint32_t, size_t> word_overlap;
  for (const std::string& w : content) {
    for (uint32_t idx : external.FactsWithWord(w)) {
      ++word_overlap[idx];
    }
  }

  // Eligible: at least one shared linked entity, or at least two shared
  // content words. Rank by total overlap.
  std::vector<std::pair<uint32_t, size_t>> scored;
  for (const auto& [idx, count] : entity_overlap) {
    auto it = word_overlap.find(idx);
    size_t words = it == word_overlap.end() ? 0 : it->second;
    scored.emplace_back(idx, count + words);
  }
  for (const auto& [idx, words] : word_overlap) {
    if (words >= 2 && entity_overlap.find(idx) == entity_overlap.end()) {
      scored.emplace_back(idx, words);
    }
  }

  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (scored.size() > limit) scored.resize(limit);

  std::vector<uint32_t> out;
  out.reserve(scored.size());
  for (const auto& [idx, overlap] : scored) {
    out.push_back(idx);
  }
  return out;
}

}  // namespace memnet
