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

#include "memnet/encoder.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "memnet/text.h"

namespace memnet {
namespace {

void WriteTableFile(const std::string& path,
                    std::span<const std::string> columns) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << columns.size() << '\n';
  for (size_t i = 0; i < columns.size(); ++i) {
    out << i << '\t' << columns[i] << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::vector<std::string> ReadTableFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) fail("missing count header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  size_t count = 0;
  auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), count);
  if (ec != std::errc() || ptr != line.data() + line.size()) {
    fail("malformed count header");
  }

  std::vector<std::string> columns(count);
  std::vector<bool> seen(count, false);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 2) fail("expected index<TAB>symbol");
    size_t index = 0;
    auto [p, e] =
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), index);
    if (e != std::errc() || p != fields[0].data() + fields[0].size() ||
        index >= count) {
      fail("index out of range");
    }
    if (seen[index]) fail("duplicate index " + std::to_string(index));
    if (fields[1].empty()) fail("empty symbol");
    seen[index] = true;
    columns[index] = std::string(fields[1]);
  }
  for (size_t i = 0; i < count; ++i) {
    if (!seen[i]) {
      throw std::runtime_error(path + ": missing index " + std::to_string(i));
    }
  }
  return columns;
}

}  // namespace

SymbolTable SymbolTable::Build(const GroupedFactStore& store) {
  SymbolTable table;
  const SymbolInterner& interner = store.interner();

  std::vector<uint32_t> handles;
  handles.reserve(store.entities().size() + store.relationships().size());
  for (EntityId e : store.entities()) handles.push_back(e.value);
  for (RelationId r : store.relationships()) handles.push_back(r.value);
  std::sort(handles.begin(), handles.end());
  handles.erase(std::unique(handles.begin(), handles.end()), handles.end());

  std::sort(handles.begin(), handles.end(), [&](uint32_t a, uint32_t b) {
    return interner.SymbolOf(a) < interner.SymbolOf(b);
  });

  table.columns_.reserve(handles.size());
  table.by_handle_.assign(interner.size(), -1);
  for (uint32_t col = 0; col < handles.size(); ++col) {
    table.columns_.push_back(interner.SymbolOf(handles[col]));
    table.by_handle_[handles[col]] = col;
  }
  for (uint32_t col = 0; col < table.columns_.size(); ++col) {
    table.by_symbol_.emplace(table.columns_[col], col);
  }
  return table;
}

std::optional<uint32_t> SymbolTable::ColumnOf(std::string_view symbol) const {
  auto it = by_symbol_.find(symbol);
  if (it == by_symbol_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> SymbolTable::ColumnOfId(uint32_t interner_id) const {
  if (interner_id >= by_handle_.size()) return std::nullopt;
  int64_t col = by_handle_[interner_id];
  if (col < 0) return std::nullopt;
  return static_cast<uint32_t>(col);
}

void SymbolTable::Save(const std::string& path) const {
  WriteTableFile(path, columns_);
}

SymbolTable SymbolTable::Load(const std::string& path,
                              SymbolInterner& interner) {
  SymbolTable table;
  table.columns_ = ReadTableFile(path);
  for (uint32_t col = 0; col < table.columns_.size(); ++col) {
    table.by_symbol_.emplace(table.columns_[col], col);
  }
  table.by_handle_.assign(interner.size(), -1);
  for (uint32_t col = 0; col < table.columns_.size(); ++col) {
    uint32_t handle = interner.Intern(table.columns_[col]);
    if (handle >= table.by_handle_.size()) {
      table.by_handle_.resize(handle + 1, -1);
    }
    table.by_handle_[handle] = col;
  }
  return table;
}

VocabTable VocabTable::Build(std::span<const std::string> questions,
                             const AliasIndex& aliases) {
  StringSet tokens;
  for (const std::string& q : questions) {
    for (std::string& t : Tokenize(q)) {
      tokens.insert(std::move(t));
    }
  }
  for (const auto& [key, entities] : aliases.keys()) {
    tokens.insert(key);
  }

  VocabTable table;
  table.columns_.assign(tokens.begin(), tokens.end());
  std::sort(table.columns_.begin(), table.columns_.end());
  for (uint32_t col = 0; col < table.columns_.size(); ++col) {
    table.by_token_.emplace(table.columns_[col], col);
  }
  return table;
}

std::optional<uint32_t> VocabTable::ColumnOf(std::string_view token) const {
  auto it = by_token_.find(token);
  if (it == by_token_.end()) return std::nullopt;
  return it->second;
}

void VocabTable::Save(const std::string& path) const {
  WriteTableFile(path, columns_);
}

VocabTable VocabTable::Load(const std::string& path) {
  VocabTable table;
  table.columns_ = ReadTableFile(path);
  for (uint32_t col = 0; col < table.columns_.size(); ++col) {
    table.by_token_.emplace(table.columns_[col], col);
  }
  return table;
}

namespace {

uint32_t RequireColumn(const SymbolTable& symbols, uint32_t handle,
                       const GroupedFactStore& store) {
  std::optional<uint32_t> col = symbols.ColumnOfId(handle);
  if (!col.has_value()) {
    throw std::runtime_error("symbol not in table: " +
                             store.interner().SymbolOf(handle));
  }
  return *col;
}

}  // namespace

SparseVector EncodeFact(const GroupedFact& fact, const SymbolTable& symbols,
                        const GroupedFactStore& store) {
  if (fact.objects.empty()) {
    throw std::invalid_argument("fact has no objects");
  }
  SparseVectorBuilder builder(symbols.size());
  builder.Add(RequireColumn(symbols, fact.subject.value, store), 1.0);
  builder.Add(RequireColumn(symbols, fact.relationship.value, store), 1.0);
  const double share = 1.0 / static_cast<double>(fact.objects.size());
  for (EntityId o : fact.objects) {
    builder.Add(RequireColumn(symbols, o.value, store), share);
  }
  return std::move(builder).Build();
}

SparseVector EncodeFactSubgraph(const GroupedFact& fact,
                                const SymbolTable& symbols,
                                const GroupedFactStore& store) {
  if (fact.objects.empty()) {
    throw std::invalid_argument("fact has no objects");
  }
  SparseVectorBuilder builder(symbols.size());
  builder.Add(RequireColumn(symbols, fact.subject.value, store), 1.0);
  builder.Add(RequireColumn(symbols, fact.relationship.value, store), 1.0);

  const double share = 1.0 / static_cast<double>(fact.objects.size());
  std::vector<uint32_t> hood;
  for (EntityId o : fact.objects) {
    // Neighborhood = the object itself plus the objects it points at. The
    // subject of the fact being encoded is deliberately not pulled in, so
    // an object without outgoing facts degenerates to the plain encoding.
    hood.clear();
    hood.push_back(o.value);
    for (uint32_t idx : store.FactsWithSubject(o)) {
      for (EntityId n : store.fact(idx).objects) {
        hood.push_back(n.value);
      }
    }
    std::sort(hood.begin(), hood.end());
    hood.erase(std::unique(hood.begin(), hood.end()), hood.end());

    const double each = share / static_cast<double>(hood.size());
    for (uint32_t handle : hood) {
      builder.Add(RequireColumn(symbols, handle, store), each);
    }
  }
  return std::move(builder).Build();
}

SparseVector EncodeQuestion(std::string_view question, const VocabTable& vocab,
                            const AliasIndex& aliases) {
  std::vector<std::string> tokens = Tokenize(question);
  std::unordered_set<uint32_t> present;

  for (const std::string& t : tokens) {
    if (std::optional<uint32_t> col = vocab.ColumnOf(t)) {
      present.insert(*col);
    }
  }
  // Alias n-grams: every contiguous token span whose text is an alias key.
  for (size_t i = 0; i < tokens.size(); ++i) {
    for (size_t j = i + 1; j <= tokens.size(); ++j) {
      std::string span = JoinTokens(tokens, i, j);
      if (!aliases.Contains(span)) continue;
      if (std::optional<uint32_t> col = vocab.ColumnOf(span)) {
        present.insert(*col);
      }
    }
  }

  SparseVectorBuilder builder(vocab.size());
  for (uint32_t col : present) {
    builder.Add(col, 1.0);
  }
  return std::move(builder).Build();
}

SparseVector EncodeExternalFact(std::string_view subject,
                                std::optional<EntityId> subject_link,
                                std::string_view relation,
                                std::string_view object,
                                std::optional<EntityId> object_link,
                                const SymbolTable& symbols,
                                const VocabTable& vocab) {
  std::unordered_set<uint32_t> present;

  auto add_words = [&](std::string_view text) {
    for (const std::string& t : Tokenize(text)) {
      if (std::optional<uint32_t> col = vocab.ColumnOf(t)) {
        present.insert(*col);
      }
    }
  };
  auto add_endpoint = [&](std::string_view text,
                          std::optional<EntityId> link) {
    if (link.has_value()) {
      if (std::optional<uint32_t> col = symbols.ColumnOf(*link)) {
        present.insert(vocab.size() + *col);
        return;
      }
    }
    add_words(text);
  };

  add_endpoint(subject, subject_link);
  add_words(relation);
  add_endpoint(object, object_link);

  SparseVectorBuilder builder(vocab.size() + symbols.size());
  for (uint32_t col : present) {
    builder.Add(col, 1.0);
  }
  return std::move(builder).Build();
}

EncoderTables BuildTables(const GroupedFactStore& store,
                          const AliasIndex& aliases,
                          std::span<const std::string> questions) {
  return EncoderTables{SymbolTable::Build(store),
                       VocabTable::Build(questions, aliases)};
}

}  // namespace memnet
