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

#ifndef MEMNET_CORE_KB_STORE_H_
#define MEMNET_CORE_KB_STORE_H_

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "memnet/text.h"

namespace memnet {

// Entities and relationships live in one shared symbol space. A handle is
// valid for the lifetime of the interner that produced it.
struct EntityId {
  uint32_t value = 0;
  auto operator<=>(const EntityId&) const = default;
};

struct RelationId {
  uint32_t value = 0;
  auto operator<=>(const RelationId&) const = default;
};

// Bidirectional map between symbol strings and dense integer handles.
// Handles are assigned in first-seen order and never invalidated; symbol
// strings are stored with stable addresses so views stay valid across
// later insertions.
class SymbolInterner {
 public:
  SymbolInterner() = default;
  // The lookup map holds views into the string storage, so copying is
  // disallowed; moving keeps element addresses and stays valid.
  SymbolInterner(const SymbolInterner&) = delete;
  SymbolInterner& operator=(const SymbolInterner&) = delete;
  SymbolInterner(SymbolInterner&&) = default;
  SymbolInterner& operator=(SymbolInterner&&) = default;

  uint32_t Intern(std::string_view symbol);
  std::optional<uint32_t> Find(std::string_view symbol) const;
  const std::string& SymbolOf(uint32_t id) const;
  size_t size() const { return symbols_.size(); }

 private:
  std::deque<std::string> symbols_;  // stable element addresses
  std::unordered_map<std::string_view, uint32_t> index_;  // views into symbols_
};

struct AtomicFact {
  EntityId subject;
  RelationId relationship;
  EntityId object;
  auto operator<=>(const AtomicFact&) const = default;
};

// One memory slot: the union of objects seen for a (subject, relationship)
// key. Objects are deduplicated and sorted by handle.
struct GroupedFact {
  EntityId subject;
  RelationId relationship;
  std::vector<EntityId> objects;
  bool operator==(const GroupedFact&) const = default;
};

// Mediator (hub) entities to collapse out of the raw triple list. Matches
// by exact identifier or by identifier prefix.
class MediatorSpec {
 public:
  void AddId(std::string id) { ids_.insert(std::move(id)); }
  void AddPrefix(std::string prefix) { prefixes_.push_back(std::move(prefix)); }
  bool IsMediator(std::string_view symbol) const;
  bool empty() const { return ids_.empty() && prefixes_.empty(); }

  // File format: one entity identifier or one "pattern:<prefix>" directive
  // per line; '#' starts a comment.
  static MediatorSpec LoadFromFile(const std::string& path);

 private:
  StringSet ids_;
  std::vector<std::string> prefixes_;
};

struct CollapseStats {
  size_t mediator_facts_removed = 0;
  size_t condensed_facts = 0;
  size_t dangling_mediators = 0;  // mediators lacking incoming or outgoing arcs
};

// Immutable grouped view of the knowledge base plus the adjacency and
// degree indexes the retrieval side needs. Keeps a pointer to the interner
// that owns the symbol strings; the interner must outlive the store.
class GroupedFactStore {
 public:
  GroupedFactStore() = default;

  size_t size() const { return facts_.size(); }
  const GroupedFact& fact(uint32_t index) const { return facts_[index]; }
  std::span<const GroupedFact> facts() const { return facts_; }

  // Index of the grouped fact with this key, if present.
  std::optional<uint32_t> Find(EntityId subject, RelationId rel) const;

  // Indexes of facts with the given subject, in store order.
  std::span<const uint32_t> FactsWithSubject(EntityId subject) const;

  // Indexes of facts containing the given entity in their object set.
  std::span<const uint32_t> FactsWithObject(EntityId object) const;

  // Number of grouped facts in which the entity appears as subject or
  // object. A fact counts once even if the entity fills both roles.
  size_t EntityDegree(EntityId entity) const;

  // All entities that appear in at least one fact, sorted by handle.
  std::span<const EntityId> entities() const { return entities_; }
  // All relationships in use, sorted by handle.
  std::span<const RelationId> relationships() const { return relationships_; }

  const SymbolInterner& interner() const { return *interner_; }
  const std::string& SymbolOf(EntityId e) const {
    return interner_->SymbolOf(e.value);
  }
  const std::string& SymbolOf(RelationId r) const {
    return interner_->SymbolOf(r.value);
  }

 private:
  friend GroupedFactStore GroupFacts(std::span<const AtomicFact>,
                                     const SymbolInterner&);

  const SymbolInterner* interner_ = nullptr;
  std::vector<GroupedFact> facts_;
  std::unordered_map<uint64_t, uint32_t> by_key_;
  std::unordered_map<uint32_t, std::vector<uint32_t>> by_subject_;
  std::unordered_map<uint32_t, std::vector<uint32_t>> by_object_;
  std::vector<uint32_t> degree_;  // indexed by interner handle
  std::vector<EntityId> entities_;
  std::vector<RelationId> relationships_;
};

// Reads tab-separated "subject<TAB>relationship<TAB>object" lines. Blank
// lines and '#' comments are skipped. Malformed lines raise with the file
// name and line number.
std::vector<AtomicFact> LoadTriples(const std::string& path,
                                    SymbolInterner& interner);

// Removes mediator nodes: every incoming arc (s, r1, m) combined with every
// outgoing arc (m, r2, o) with o != s yields the condensed fact (s, r2, o);
// all facts incident to a mediator are dropped. Pass-through facts keep
// their original order; condensed facts follow, sorted by the (subject,
// relationship, object) symbol strings. Pairs whose endpoints are
// themselves mediators are not condensed, so no output fact touches a
// mediator. Idempotent: a second pass is the identity.
std::vector<AtomicFact> CollapseMediators(std::span<const AtomicFact> facts,
                                          const MediatorSpec& spec,
                                          const SymbolInterner& interner,
                                          CollapseStats* stats = nullptr);

// Groups atomic facts by (subject, relationship) in first-seen order and
// builds the retrieval indexes.
GroupedFactStore GroupFacts(std::span<const AtomicFact> facts,
                            const SymbolInterner& interner);

// Flattens a store back to one atomic fact per (subject, relationship,
// object), in store order. Regrouping the result reproduces the store.
std::vector<AtomicFact> FlattenFacts(const GroupedFactStore& store);

// Grouped fact file: "subject<TAB>relationship<TAB>object[,object...]".
void SaveGroupedFacts(const GroupedFactStore& store, const std::string& path);
std::vector<AtomicFact> LoadGroupedTriples(const std::string& path,
                                           SymbolInterner& interner);

struct AliasRecord {
  EntityId entity;
  std::string alias;  // raw text as read from the file
};

struct AliasIndexStats {
  size_t records = 0;
  size_t skipped_empty = 0;  // aliases that normalize to the empty string
};

// Lookup from normalized alias text to the entities that carry it, plus the
// per-entity alias lists in file order (the first alias is the canonical
// name used when printing answers).
class AliasIndex {
 public:
  // Entities carrying this alias, in first-seen order, deduplicated.
  // Returns an empty span for unknown aliases. The key must already be
  // normalized; Lookup() normalizes for you.
  std::span<const EntityId> LookupNormalized(std::string_view normalized) const;
  std::span<const EntityId> Lookup(std::string_view raw) const;
  bool Contains(std::string_view normalized) const;

  // Raw alias strings of an entity in file order; empty if none.
  std::span<const std::string> AliasesOf(EntityId entity) const;

  // First alias by file order, or nullopt when the entity has none.
  std::optional<std::string_view> CanonicalName(EntityId entity) const;

  // All normalized alias keys (unordered).
  const StringMap<std::vector<EntityId>>& keys() const { return by_alias_; }

  size_t num_keys() const { return by_alias_.size(); }
  const AliasIndexStats& stats() const { return stats_; }

 private:
  friend AliasIndex BuildAliasIndex(std::span<const AliasRecord>);

  StringMap<std::vector<EntityId>> by_alias_;
  std::unordered_map<uint32_t, std::vector<std::string>> by_entity_;
  AliasIndexStats stats_;
};

// Reads tab-separated "entity<TAB>alias" lines in file order.
std::vector<AliasRecord> LoadAliasRecords(const std::string& path,
                                          SymbolInterner& interner);

// Builds the normalized index. Records whose alias normalizes to the empty
// string are skipped and counted.
AliasIndex BuildAliasIndex(std::span<const AliasRecord> records);

}  // namespace memnet

template <>
struct std::hash<memnet::EntityId> {
  size_t operator()(const memnet::EntityId& e) const noexcept {
    return std::hash<uint32_t>()(e.value);
  }
};

template <>
struct std::hash<memnet::RelationId> {
  size_t operator()(const memnet::RelationId& r) const noexcept {
    return std::hash<uint32_t>()(r.value);
  }
};

#endif  // MEMNET_CORE_KB_STORE_H_
