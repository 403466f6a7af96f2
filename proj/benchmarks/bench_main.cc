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
//
// Microbenchmarks for the hot paths: grouping, encoding, scoring, gradient
// steps, candidate generation, and end to end answering.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "memnet/candidate_gen.h"
#include "memnet/encoder.h"
#include "memnet/eval_answer.h"
#include "memnet/trainer.h"

namespace {

using namespace memnet;

// A synthetic world sized so every fixture fits in cache-unfriendly but
// benchmark-friendly territory: ~400 entities, ~2.6k grouped facts.
struct World {
  SymbolInterner interner;
  std::vector<AtomicFact> atomic;
  GroupedFactStore store;
  std::vector<AliasRecord> alias_records;
  AliasIndex aliases;
  EncoderTables tables;
  std::vector<std::string> questions;
  EmbeddingModel model;

  World() {
    std::mt19937_64 rng(2026);
    constexpr int kEntities = 400;
    constexpr int kRelations = 12;
    std::uniform_int_distribution<int> rel_count(5, 8);
    std::uniform_int_distribution<int> rel_pick(0, kRelations - 1);
    std::uniform_int_distribution<int> object_count(1, 3);
    std::uniform_int_distribution<int> entity_pick(0, kEntities - 1);

    for (int e = 0; e < kEntities; ++e) {
      std::string symbol = "ent" + std::to_string(e);
      uint32_t id = interner.Intern(symbol);
      alias_records.push_back(
          AliasRecord{EntityId{id}, "entity " + std::to_string(e)});
      int rels = rel_count(rng);
      for (int k = 0; k < rels; ++k) {
        int r = rel_pick(rng);
        uint32_t rel = interner.Intern("word" + std::to_string(r));
        int objects = object_count(rng);
        for (int o = 0; o < objects; ++o) {
          uint32_t obj =
              interner.Intern("ent" + std::to_string(entity_pick(rng)));
          atomic.push_back(
              AtomicFact{EntityId{id}, RelationId{rel}, EntityId{obj}});
        }
      }
    }
    store = GroupFacts(atomic, interner);
    aliases = BuildAliasIndex(alias_records);

    for (int i = 0; i < 512; ++i) {
      int e = entity_pick(rng);
      int r = rel_pick(rng);
      questions.push_back("which word" + std::to_string(r) +
                          " does entity " + std::to_string(e) + " have ?");
    }
    tables = BuildTables(store, aliases, questions);

    Hyperparams hyper;
    hyper.dim = 64;
    hyper.seed = 9;
    model = EmbeddingModel(tables.vocab.size(), tables.symbols.size(), hyper);
  }
};

const World& Fixture() {
  static const World* world = new World();
  return *world;
}

void BM_GroupFacts(benchmark::State& state) {
  World world;  // local copy so grouping sees a fresh interner each run
  for (auto _ : state) {
    GroupedFactStore store = GroupFacts(world.atomic, world.interner);
    benchmark::DoNotOptimize(store.size());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(world.atomic.size()));
}
BENCHMARK(BM_GroupFacts)->Unit(benchmark::kMillisecond);

void BM_EncodeQuestion(benchmark::State& state) {
  const World& world = Fixture();
  size_t i = 0;
  for (auto _ : state) {
    SparseVector v = EncodeQuestion(world.questions[i], world.tables.vocab,
                                    world.aliases);
    benchmark::DoNotOptimize(v.entries.size());
    i = (i + 1) % world.questions.size();
  }
}
BENCHMARK(BM_EncodeQuestion);

void BM_EncodeFact(benchmark::State& state) {
  const World& world = Fixture();
  uint32_t i = 0;
  for (auto _ : state) {
    SparseVector v =
        EncodeFact(world.store.fact(i), world.tables.symbols, world.store);
    benchmark::DoNotOptimize(v.entries.size());
    i = (i + 1) % static_cast<uint32_t>(world.store.size());
  }
}
BENCHMARK(BM_EncodeFact);

void BM_EncodeFactSubgraph(benchmark::State& state) {
  const World& world = Fixture();
  uint32_t i = 0;
  for (auto _ : state) {
    SparseVector v = EncodeFactSubgraph(world.store.fact(i),
                                        world.tables.symbols, world.store);
    benchmark::DoNotOptimize(v.entries.size());
    i = (i + 1) % static_cast<uint32_t>(world.store.size());
  }
}
BENCHMARK(BM_EncodeFactSubgraph);

void BM_ScoreQa(benchmark::State& state) {
  const World& world = Fixture();
  std::vector<SparseVector> qs, fs;
  for (int i = 0; i < 64; ++i) {
    qs.push_back(EncodeQuestion(world.questions[i], world.tables.vocab,
                                world.aliases));
    fs.push_back(EncodeFact(world.store.fact(i), world.tables.symbols,
                            world.store));
  }
  size_t i = 0;
  for (auto _ : state) {
    double s = world.model.ScoreQa(qs[i], fs[i]);
    benchmark::DoNotOptimize(s);
    i = (i + 1) % qs.size();
  }
}
BENCHMARK(BM_ScoreQa);

void BM_GradStep(benchmark::State& state) {
  const World& world = Fixture();
  EmbeddingModel model = world.model;  // mutated copy
  std::vector<SparseVector> qs, fs;
  for (int i = 0; i < 64; ++i) {
    qs.push_back(EncodeQuestion(world.questions[i], world.tables.vocab,
                                world.aliases));
    fs.push_back(EncodeFact(world.store.fact(i), world.tables.symbols,
                            world.store));
  }
  size_t i = 0;
  for (auto _ : state) {
    double loss = GradStep(qs[i], fs[i], fs[(i + 7) % fs.size()], model,
                           LossKind::kQa);
    benchmark::DoNotOptimize(loss);
    i = (i + 1) % qs.size();
  }
}
BENCHMARK(BM_GradStep);

void BM_GenerateCandidates(benchmark::State& state) {
  const World& world = Fixture();
  const WordLists& lists = WordLists::Defaults();
  size_t i = 0;
  for (auto _ : state) {
    CandidateSet set =
        GenerateCandidates(world.questions[i], world.store, world.aliases,
                           lists);
    benchmark::DoNotOptimize(set.fact_indices.size());
    i = (i + 1) % world.questions.size();
  }
}
BENCHMARK(BM_GenerateCandidates);

void BM_Answer(benchmark::State& state) {
  const World& world = Fixture();
  AnswerOptions options;
  options.models.push_back(&world.model);
  size_t i = 0;
  for (auto _ : state) {
    Prediction p = Answer(world.questions[i], world.store, world.tables,
                          world.aliases, options);
    benchmark::DoNotOptimize(p.ranked.size());
    i = (i + 1) % world.questions.size();
  }
}
BENCHMARK(BM_Answer);

}  // namespace

BENCHMARK_MAIN();
