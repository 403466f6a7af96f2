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

#ifndef MEMNET_CORE_MEMORY_EXTEND_H_
#define MEMNET_CORE_MEMORY_EXTEND_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memnet/candidate_gen.h"
#include "memnet/encoder.h"
#include "memnet/kb_store.h"
#include "memnet/sparse_vector.h"

namespace memnet {

// A raw fact from an external string knowledge base.
struct ExternalFactInput {
  std::string subject;
  std::string relation;
  std::string object;
  bool operator==(const ExternalFactInput&) const = default;
};

// Reads tab-separated "subject<TAB>relation<TAB>object" lines.
std::vector<ExternalFactInput> LoadExternalFacts(const std::string& path);

// An external fact after linking and encoding. Links point into the entity
// space of the store the facts were added to.
struct ExternalFact {
  ExternalFactInput input;
  std::optional<EntityId> subject_link;
  std::optional<EntityId> object_link;
  SparseVector encoding;  // dim = vocab + symbols
};

// Resolves a string endpoint to a stored entity: the normalized string must
// equal a normalized alias. Ambiguity goes to the entity of highest degree,
// ties to the smaller symbol string.
std::optional<EntityId> LinkEntity(std::string_view text,
                                   const AliasIndex& aliases,
                                   const GroupedFactStore& store);

struct LinkStats {
  size_t facts = 0;
  size_t linked_subjects = 0;
  size_t linked_objects = 0;

  double LinkRate() const {
    return facts == 0 ? 0.0
                      : static_cast<double>(linked_subjects + linked_objects) /
                            (2.0 * static_cast<double>(facts));
  }
};

// External facts grafted next to a trained model's memory. Building this
// never mutates the store, the tables, or any model.
class ExternalStore {
 public:
  size_t size() const { return facts_.size(); }
  const ExternalFact& fact(uint32_t index) const { return facts_[index]; }
  const LinkStats& stats() const { return stats_; }

  std::span<const uint32_t> FactsWithWord(std::string_view word) const;
  std::span<const uint32_t> FactsWithEntity(EntityId entity) const;

 private:
  friend ExternalStore AddExternalFacts(std::span<const ExternalFactInput>,
                                        const GroupedFactStore&,
                                        const AliasIndex&, const SymbolTable&,
                                        const VocabTable&);

  std::vector<ExternalFact> facts_;
  StringMap<std::vector<uint32_t>> by_word_;  // normalized token -> facts
  std::unordered_map<uint32_t, std::vector<uint32_t>> by_entity_;
  LinkStats stats_;
};

// Links endpoints against the alias index, encodes every fact over the
// concatenated space, and builds the retrieval indexes.
ExternalStore AddExternalFacts(std::span<const ExternalFactInput> inputs,
                               const GroupedFactStore& store,
                               const AliasIndex& aliases,
                               const SymbolTable& symbols,
                               const VocabTable& vocab);

// Retrieves external candidates for a question: facts sharing a linked
// entity with the question's candidate entities, plus facts sharing at
// least two content words (question tokens minus stopwords) with the fact
// text. Ranked by overlap count, ties by fact index, capped at limit.
std::vector<uint32_t> ExternalCandidates(std::string_view question,
                                         const ExternalStore& external,
                                         const GroupedFactStore& store,
                                         const AliasIndex& aliases,
                                         const WordLists& lists,
                                         size_t limit = 100);

}  // namespace memnet

#endif  // MEMNET_CORE_MEMORY_EXTEND_H_
