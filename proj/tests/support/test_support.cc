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

#include "support/test_support.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "memnet/supervision.h"

namespace memnet::testing {

TempDir::TempDir() {
  std::random_device rd;
  std::mt19937_64 rng((static_cast<uint64_t>(rd()) << 32) ^ rd());
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::filesystem::path candidate =
        std::filesystem::temp_directory_path() /
        ("memnet-test-" + std::to_string(rng()));
    std::error_code ec;
    if (std::filesystem::create_directory(candidate, ec)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string TempDir::File(std::string_view name) const {
  return (path_ / name).string();
}

void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed to write " + path);
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("failed to read " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

EntityId ToyKb::Entity(std::string_view symbol) const {
  std::optional<uint32_t> id = interner.Find(symbol);
  if (!id.has_value()) {
    throw std::runtime_error("test entity not interned: " + std::string(symbol));
  }
  return EntityId{*id};
}

RelationId ToyKb::Relation(std::string_view symbol) const {
  std::optional<uint32_t> id = interner.Find(symbol);
  if (!id.has_value()) {
    throw std::runtime_error("test relation not interned: " +
                             std::string(symbol));
  }
  return RelationId{*id};
}

uint32_t ToyKb::FactIndex(std::string_view subject, std::string_view rel) const {
  std::optional<uint32_t> idx = store.Find(Entity(subject), Relation(rel));
  if (!idx.has_value()) {
    throw std::runtime_error("test fact not stored: " + std::string(subject) +
                             " " + std::string(rel));
  }
  return *idx;
}

std::unique_ptr<ToyKb> MakeToyKb(
    const std::vector<Triple>& triples,
    const std::vector<std::pair<std::string, std::string>>& aliases) {
  auto kb = std::make_unique<ToyKb>();
  for (const Triple& t : triples) {
    kb->atomic.push_back(AtomicFact{EntityId{kb->interner.Intern(t.s)},
                                    RelationId{kb->interner.Intern(t.r)},
                                    EntityId{kb->interner.Intern(t.o)}});
  }
  kb->store = GroupFacts(kb->atomic, kb->interner);
  for (const auto& [entity, alias] : aliases) {
    kb->alias_records.push_back(
        AliasRecord{EntityId{kb->interner.Intern(entity)}, alias});
  }
  kb->aliases = BuildAliasIndex(kb->alias_records);
  return kb;
}

std::vector<Triple> RandomTriples(std::mt19937_64& rng, size_t num_entities,
                                  size_t num_rels, size_t num_facts,
                                  size_t num_mediators, double mediator_prob) {
  std::uniform_int_distribution<size_t> entity(0, num_entities - 1);
  std::uniform_int_distribution<size_t> rel(0, num_rels - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto endpoint = [&]() -> std::string {
    if (num_mediators > 0 && coin(rng) < mediator_prob) {
      std::uniform_int_distribution<size_t> med(0, num_mediators - 1);
      return "cvt" + std::to_string(med(rng));
    }
    return "e" + std::to_string(entity(rng));
  };

  std::vector<Triple> out;
  out.reserve(num_facts);
  for (size_t i = 0; i < num_facts; ++i) {
    out.push_back(
        Triple{endpoint(), "r" + std::to_string(rel(rng)), endpoint()});
  }
  return out;
}

std::string NumberWord(size_t n) {
  static const char* kOnes[] = {"zero",    "one",     "two",       "three",
                                "four",    "five",    "six",       "seven",
                                "eight",   "nine",    "ten",       "eleven",
                                "twelve",  "thirteen", "fourteen", "fifteen",
                                "sixteen", "seventeen", "eighteen", "nineteen"};
  if (n < 20) return kOnes[n];
  if (n < 30) return std::string("twenty") + (n == 20 ? "" : kOnes[n - 20]);
  throw std::invalid_argument("NumberWord supports 0..29");
}

Benchmark MakeBenchmark(const BenchmarkSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  static const char* kFlavors[] = {"alpha", "beta",  "gamma", "delta",
                                   "omega", "sigma", "kappa", "zeta"};

  std::vector<Triple> triples;
  std::uniform_int_distribution<size_t> rels_per_subject(
      spec.min_rels_per_subject, spec.max_rels_per_subject);
  std::uniform_int_distribution<size_t> objects_per_fact(spec.min_objects,
                                                         spec.max_objects);
  std::uniform_int_distribution<size_t> any_entity(0, spec.entities - 1);

  auto entity_symbol = [](size_t i) { return "ent.e" + std::to_string(i); };
  auto rel_symbol = [](size_t i) { return "toy.attr_" + NumberWord(i + 1); };

  std::vector<size_t> rel_order(spec.rels);
  for (size_t i = 0; i < spec.rels; ++i) rel_order[i] = i;

  for (size_t s = 0; s < spec.entities; ++s) {
    std::shuffle(rel_order.begin(), rel_order.end(), rng);
    size_t nrels = rels_per_subject(rng);
    for (size_t ri = 0; ri < nrels && ri < rel_order.size(); ++ri) {
      size_t k = objects_per_fact(rng);
      for (size_t oi = 0; oi < k; ++oi) {
        size_t o = any_entity(rng);
        if (o == s) o = (o + 1) % spec.entities;
        triples.push_back(Triple{entity_symbol(s), rel_symbol(rel_order[ri]),
                                 entity_symbol(o)});
      }
    }
  }

  // Every entity gets the unique token "ent<i>" in all of its aliases, so
  // each alias resolves to exactly one entity and appears verbatim in the
  // questions built from it.
  std::vector<std::pair<std::string, std::string>> alias_pairs;
  std::uniform_int_distribution<size_t> alias_count(1, 3);
  std::uniform_int_distribution<size_t> flavor(0, std::size(kFlavors) - 1);
  for (size_t i = 0; i < spec.entities; ++i) {
    std::string core = "ent" + std::to_string(i);
    size_t n = alias_count(rng);
    alias_pairs.emplace_back(entity_symbol(i), core);
    if (n >= 2) {
      alias_pairs.emplace_back(entity_symbol(i),
                               core + " " + kFlavors[flavor(rng)]);
    }
    if (n >= 3) {
      alias_pairs.emplace_back(entity_symbol(i),
                               std::string(kFlavors[flavor(rng)]) + " " + core);
    }
  }

  Benchmark b;
  b.kb = MakeToyKb(triples, alias_pairs);

  SyntheticConfig config;
  config.max_objects = 10;
  config.seed = spec.seed + 1;
  std::vector<QAExample> all =
      GenerateSynthetic(b.kb->store, b.kb->aliases, config);
  std::shuffle(all.begin(), all.end(), rng);
  if (all.size() > spec.questions) all.resize(spec.questions);

  size_t train_end = all.size() * 7 / 10;
  size_t valid_end = all.size() * 8 / 10;
  b.train.assign(all.begin(), all.begin() + train_end);
  b.valid.assign(all.begin() + train_end, all.begin() + valid_end);
  b.test.assign(all.begin() + valid_end, all.end());

  std::vector<std::string> corpus;
  corpus.reserve(b.train.size() + b.valid.size());
  for (const QAExample& e : b.train) corpus.push_back(e.question);
  for (const QAExample& e : b.valid) corpus.push_back(e.question);
  b.tables = BuildTables(b.kb->store, b.kb->aliases, corpus);
  return b;
}

}  // namespace memnet::testing
