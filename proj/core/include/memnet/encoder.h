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

#ifndef MEMNET_CORE_ENCODER_H_
#define MEMNET_CORE_ENCODER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "memnet/kb_store.h"
#include "memnet/sparse_vector.h"

namespace memnet {

// Maps every entity and relationship symbol of a store to a dense column
// index in [0, size()). Assignment is deterministic: symbols are sorted
// lexicographically.
class SymbolTable {
 public:
  SymbolTable() = default;

  static SymbolTable Build(const GroupedFactStore& store);

  uint32_t size() const { return static_cast<uint32_t>(columns_.size()); }

  std::optional<uint32_t> ColumnOf(std::string_view symbol) const;
  // Fast path keyed by interner handle. Handles unknown to the table (for
  // example entities interned after the build) resolve to nullopt.
  std::optional<uint32_t> ColumnOfId(uint32_t interner_id) const;
  std::optional<uint32_t> ColumnOf(EntityId e) const {
    return ColumnOfId(e.value);
  }
  std::optional<uint32_t> ColumnOf(RelationId r) const {
    return ColumnOfId(r.value);
  }

  const std::string& SymbolAt(uint32_t column) const {
    return columns_.at(column);
  }

  // One "index<TAB>symbol" line per entry after a count header line.
  void Save(const std::string& path) const;
  // Loading interns the symbols so handle lookups work in a fresh process.
  static SymbolTable Load(const std::string& path, SymbolInterner& interner);

 private:
  std::vector<std::string> columns_;  // column -> symbol
  StringMap<uint32_t> by_symbol_;
  std::vector<int64_t> by_handle_;    // interner handle -> column or -1
};

// Maps vocabulary tokens (question words and whole normalized aliases) to a
// dense column index in [0, size()). A multi-word alias is one token whose
// text contains spaces. Assignment is deterministic by sorted token order.
class VocabTable {
 public:
  VocabTable() = default;

  // Vocabulary = all tokens of the question corpus plus all normalized
  // alias keys. String-identical entries share one column.
  static VocabTable Build(std::span<const std::string> questions,
                          const AliasIndex& aliases);

  uint32_t size() const { return static_cast<uint32_t>(columns_.size()); }
  std::optional<uint32_t> ColumnOf(std::string_view token) const;
  const std::string& TokenAt(uint32_t column) const {
    return columns_.at(column);
  }

  void Save(const std::string& path) const;
  static VocabTable Load(const std::string& path);

 private:
  std::vector<std::string> columns_;  // column -> token
  StringMap<uint32_t> by_token_;
};

// Bag-of-symbols fact encoding over the symbol space: subject and
// relationship get weight 1, each of the k objects gets 1/k. Contributions
// landing on the same column sum, so the total mass is always 3. Raises if
// a symbol is missing from the table, naming the symbol.
SparseVector EncodeFact(const GroupedFact& fact, const SymbolTable& symbols,
                        const GroupedFactStore& store);

// Variant for scoring against neighborhoods: each object is replaced by
// itself plus the objects of its outgoing facts, uniformly weighted so the
// object's total mass stays 1/k. Subject and relationship keep weight 1.
// An object with no outgoing facts contributes exactly as in EncodeFact.
SparseVector EncodeFactSubgraph(const GroupedFact& fact,
                                const SymbolTable& symbols,
                                const GroupedFactStore& store);

// Bag-of-ngrams question encoding over the vocabulary space: weight 1 for
// every question word present in the vocabulary and for every alias n-gram
// of the question (contiguous token spans matched against the alias index).
// Entries are presences, never counts.
SparseVector EncodeQuestion(std::string_view question, const VocabTable& vocab,
                            const AliasIndex& aliases);

// Encoding for facts from an external string knowledge base, over the
// concatenated index space [0, vocab.size() + symbols.size()). A linked
// endpoint contributes its entity symbol entry offset by vocab.size(); an
// unlinked endpoint contributes the bag of its words. The relationship
// always contributes its bag of words. All weights are 1 per present token
// or symbol. A link to an entity absent from the symbol table falls back to
// the bag of words.
SparseVector EncodeExternalFact(std::string_view subject,
                                std::optional<EntityId> subject_link,
                                std::string_view relation,
                                std::string_view object,
                                std::optional<EntityId> object_link,
                                const SymbolTable& symbols,
                                const VocabTable& vocab);

struct EncoderTables {
  SymbolTable symbols;
  VocabTable vocab;
};

// Builds both tables for a store, alias index, and question corpus.
EncoderTables BuildTables(const GroupedFactStore& store,
                          const AliasIndex& aliases,
                          std::span<const std::string> questions);

}  // namespace memnet

#endif  // MEMNET_CORE_ENCODER_H_
