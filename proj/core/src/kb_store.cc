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

#include "memnet/kb_store.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "memnet/text.h"

namespace memnet {
namespace {

constexpr uint64_t PackKey(EntityId s, RelationId r) {
  return (static_cast<uint64_t>(s.value) << 32) | r.value;
}

// Calls fn(line_number, line) for every non-comment line of the file.
// Line numbers are 1-based and count every physical line.
template <typename Fn>
void ForEachDataLine(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    fn(line_no, std::string_view(line));
  }
}

[[noreturn]] void ParseFail(const std::string& path, size_t line_no,
                            const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

uint32_t SymbolInterner::Intern(std::string_view symbol) {
  auto it = index_.find(symbol);
  if (it != index_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(symbols_.size());
  symbols_.emplace_back(symbol);
  index_.emplace(symbols_.back(), id);
  return id;
}

std::optional<uint32_t> SymbolInterner::Find(std::string_view symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& SymbolInterner::SymbolOf(uint32_t id) const {
  return symbols_.at(id);
}

bool MediatorSpec::IsMediator(std::string_view symbol) const {
  if (ids_.count(symbol) > 0) return true;
  for (const std::string& prefix : prefixes_) {
    if (symbol.substr(0, prefix.size()) == prefix) return true;
  }
  return false;
}

MediatorSpec MediatorSpec::LoadFromFile(const std::string& path) {
  MediatorSpec spec;
  constexpr std::string_view kPatternPrefix = "pattern:";
  ForEachDataLine(path, [&](size_t line_no, std::string_view line) {
    if (line.substr(0, kPatternPrefix.size()) == kPatternPrefix) {
      std::string prefix(line.substr(kPatternPrefix.size()));
      if (prefix.empty()) ParseFail(path, line_no, "empty mediator pattern");
      spec.AddPrefix(std::move(prefix));
    } else {
      spec.AddId(std::string(line));
    }
  });
  return spec;
}

std::vector<AtomicFact> LoadTriples(const std::string& path,
                                    SymbolInterner& interner) {
  std::vector<AtomicFact> facts;
  ForEachDataLine(path, [&](size_t line_no, std::string_view line) {
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 3) {
      ParseFail(path, line_no,
                "expected 3 tab-separated fields, got " +
                    std::to_string(fields.size()));
    }
    for (std::string_view f : fields) {
      if (f.empty()) ParseFail(path, line_no, "empty field");
    }
    facts.push_back(AtomicFact{EntityId{interner.Intern(fields[0])},
                               RelationId{interner.Intern(fields[1])},
                               EntityId{interner.Intern(fields[2])}});
  });
  return facts;
}

std::vector<AtomicFact> CollapseMediators(std::span<const AtomicFact> facts,
                                          const MediatorSpec& spec,
                                          const SymbolInterner& interner,
                                          CollapseStats* stats) {
  CollapseStats local;
  std::vector<AtomicFact> out;

  // Mediator status per handle, resolved once.
  std::unordered_map<uint32_t, bool> mediator_cache;
  auto is_mediator = [&](uint32_t id) {
    auto it = mediator_cache.find(id);
    if (it != mediator_cache.end()) return it->second;
    bool m = spec.IsMediator(interner.SymbolOf(id));
    mediator_cache.emplace(id, m);
    return m;
  };

  struct Arcs {
    std::vector<std::pair<EntityId, RelationId>> in;   // (s, r1), s not mediator
    std::vector<std::pair<RelationId, EntityId>> out;  // (r2, o), o not mediator
    bool has_in = false;   // any incoming arc, mediator sources included
    bool has_out = false;
  };
  std::unordered_map<uint32_t, Arcs> arcs;

  for (const AtomicFact& f : facts) {
    bool subj_med = is_mediator(f.subject.value);
    bool obj_med = is_mediator(f.object.value);
    if (!subj_med && !obj_med) {
      out.push_back(f);
      continue;
    }
    ++local.mediator_facts_removed;
    if (obj_med) {
      Arcs& a = arcs[f.object.value];
      a.has_in = true;
      if (!subj_med) a.in.emplace_back(f.subject, f.relationship);
    }
    if (subj_med) {
      Arcs& a = arcs[f.subject.value];
      a.has_out = true;
      if (!obj_med) a.out.emplace_back(f.relationship, f.object);
    }
  }

  std::vector<AtomicFact> condensed;
  for (const auto& [mid, a] : arcs) {
    if (!a.has_in || !a.has_out) {
      ++local.dangling_mediators;
      continue;
    }
    for (const auto& [s, r1] : a.in) {
      for (const auto& [r2, o] : a.out) {
        if (o == s) continue;
        condensed.push_back(AtomicFact{s, r2, o});
      }
    }
  }

  std::sort(condensed.begin(), condensed.end(),
            [&](const AtomicFact& a, const AtomicFact& b) {
              return std::tie(interner.SymbolOf(a.subject.value),
                              interner.SymbolOf(a.relationship.value),
                              interner.SymbolOf(a.object.value)) <
                     std::tie(interner.SymbolOf(b.subject.value),
                              interner.SymbolOf(b.relationship.value),
                              interner.SymbolOf(b.object.value));
            });
  local.condensed_facts = condensed.size();
  out.insert(out.end(), condensed.begin(), condensed.end());

  if (stats != nullptr) *stats = local;
  return out;
}

GroupedFactStore GroupFacts(std::span<const AtomicFact> facts,
                            const SymbolInterner& interner) {
  GroupedFactStore store;
  store.interner_ = &interner;

  for (const AtomicFact& f : facts) {
    uint64_t key = PackKey(f.subject, f.relationship);
    auto [it, inserted] =
        store.by_key_.emplace(key, static_cast<uint32_t>(store.facts_.size()));
    if (inserted) {
      store.facts_.push_back(GroupedFact{f.subject, f.relationship, {}});
    }
    store.facts_[it->second].objects.push_back(f.object);
  }

  store.degree_.assign(interner.size(), 0);
  std::vector<EntityId> members;
  for (uint32_t idx = 0; idx < store.facts_.size(); ++idx) {
    GroupedFact& g = store.facts_[idx];
    std::sort(g.objects.begin(), g.objects.end());
    g.objects.erase(std::unique(g.objects.begin(), g.objects.end()),
                    g.objects.end());

    store.by_subject_[g.subject.value].push_back(idx);
    for (EntityId o : g.objects) {
      store.by_object_[o.value].push_back(idx);
    }

    members.assign(g.objects.begin(), g.objects.end());
    members.push_back(g.subject);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (EntityId e : members) {
      ++store.degree_[e.value];
    }
  }

  for (uint32_t id = 0; id < store.degree_.size(); ++id) {
    if (store.degree_[id] > 0) store.entities_.push_back(EntityId{id});
  }
  std::vector<uint32_t> rel_ids;
  for (const GroupedFact& g : store.facts_) {
    rel_ids.push_back(g.relationship.value);
  }
  std::sort(rel_ids.begin(), rel_ids.end());
  rel_ids.erase(std::unique(rel_ids.begin(), rel_ids.end()), rel_ids.end());
  for (uint32_t id : rel_ids) store.relationships_.push_back(RelationId{id});

  return store;
}

std::optional<uint32_t> GroupedFactStore::Find(EntityId subject,
                                               RelationId rel) const {
  auto it = by_key_.find(PackKey(subject, rel));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::span<const uint32_t> GroupedFactStore::FactsWithSubject(
    EntityId subject) const {
  auto it = by_subject_.find(subject.value);
  if (it == by_subject_.end()) return {};
  return it->second;
}

std::span<const uint32_t> GroupedFactStore::FactsWithObject(
    EntityId object) const {
  auto it = by_object_.find(object.value);
  if (it == by_object_.end()) return {};
  return it->second;
}

size_t GroupedFactStore::EntityDegree(EntityId entity) const {
  if (entity.value >= degree_.size()) return 0;
  return degree_[entity.value];
}

std::vector<AtomicFact> FlattenFacts(const GroupedFactStore& store) {
  std::vector<AtomicFact> facts;
  for (const GroupedFact& g : store.facts()) {
    for (EntityId o : g.objects) {
      facts.push_back(AtomicFact{g.subject, g.relationship, o});
    }
  }
  return facts;
}

void SaveGroupedFacts(const GroupedFactStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  for (const GroupedFact& g : store.facts()) {
    out << store.SymbolOf(g.subject) << '\t' << store.SymbolOf(g.relationship)
        << '\t';
    for (size_t i = 0; i < g.objects.size(); ++i) {
      if (i > 0) out << ',';
      out << store.SymbolOf(g.objects[i]);
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::vector<AtomicFact> LoadGroupedTriples(const std::string& path,
                                           SymbolInterner& interner) {
  std::vector<AtomicFact> facts;
  ForEachDataLine(path, [&](size_t line_no, std::string_view line) {
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 3) {
      ParseFail(path, line_no,
                "expected 3 tab-separated fields, got " +
                    std::to_string(fields.size()));
    }
    EntityId subject{interner.Intern(fields[0])};
    RelationId rel{interner.Intern(fields[1])};
    for (std::string_view obj : SplitChar(fields[2], ',')) {
      if (obj.empty()) ParseFail(path, line_no, "empty object");
      facts.push_back(AtomicFact{subject, rel, EntityId{interner.Intern(obj)}});
    }
  });
  return facts;
}

std::vector<AliasRecord> LoadAliasRecords(const std::string& path,
                                          SymbolInterner& interner) {
  std::vector<AliasRecord> records;
  ForEachDataLine(path, [&](size_t line_no, std::string_view line) {
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 2) {
      ParseFail(path, line_no,
                "expected 2 tab-separated fields, got " +
                    std::to_string(fields.size()));
    }
    if (fields[0].empty()) ParseFail(path, line_no, "empty entity field");
    records.push_back(
        AliasRecord{EntityId{interner.Intern(fields[0])}, std::string(fields[1])});
  });
  return records;
}

AliasIndex BuildAliasIndex(std::span<const AliasRecord> records) {
  AliasIndex index;
  index.stats_.records = records.size();
  for (const AliasRecord& rec : records) {
    std::string key = NormalizeText(rec.alias);
    if (key.empty()) {
      ++index.stats_.skipped_empty;
      continue;
    }
    std::vector<EntityId>& entities = index.by_alias_[key];
    if (std::find(entities.begin(), entities.end(), rec.entity) ==
        entities.end()) {
      entities.push_back(rec.entity);
    }
    std::vector<std::string>& aliases = index.by_entity_[rec.entity.value];
    if (std::find(aliases.begin(), aliases.end(), rec.alias) == aliases.end()) {
      aliases.push_back(rec.alias);
    }
  }
  return index;
}

std::span<const EntityId> AliasIndex::LookupNormalized(
    std::string_view normalized) const {
  auto it = by_alias_.find(normalized);
  if (it == by_alias_.end()) return {};
  return it->second;
}

std::span<const EntityId> AliasIndex::Lookup(std::string_view raw) const {
  return LookupNormalized(NormalizeText(raw));
}

bool AliasIndex::Contains(std::string_view normalized) const {
  return by_alias_.count(normalized) > 0;
}

std::span<const std::string> AliasIndex::AliasesOf(EntityId entity) const {
  auto it = by_entity_.find(entity.value);
  if (it == by_entity_.end()) return {};
  return it->second;
}

std::optional<std::string_view> AliasIndex::CanonicalName(
    EntityId entity) const {
  std::span<const std::string> aliases = AliasesOf(entity);
  if (aliases.empty()) return std::nullopt;
  return std::string_view(aliases.front());
}

}  // namespace memnet
