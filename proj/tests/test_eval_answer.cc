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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memnet/eval_answer.h"
#include "support/oracles.h"
#include "support/test_support.h"

using namespace memnet;
using namespace memnet::testing;

namespace {

struct EvalWorld {
  std::unique_ptr<ToyKb> kb;
  EncoderTables tables;
};

// Ten subjects with one-word aliases and two facts each; questions built
// from those aliases always yield candidates.
EvalWorld MakeEvalWorld() {
  std::vector<Triple> triples;
  std::vector<std::pair<std::string, std::string>> aliases;
  for (int i = 0; i < 10; ++i) {
    std::string subject = "ent.e" + std::to_string(i);
    triples.push_back(Triple{subject, "toy.color",
                             "ent.e" + std::to_string((i + 1) % 10)});
    triples.push_back(Triple{subject, "toy.shape",
                             "ent.e" + std::to_string((i + 2) % 10)});
    aliases.emplace_back(subject, "widget" + std::to_string(i));
  }
  EvalWorld world;
  world.kb = MakeToyKb(triples, aliases);
  std::vector<std::string> corpus;
  for (int i = 0; i < 10; ++i) {
    corpus.push_back("what is the color of widget" + std::to_string(i));
    corpus.push_back("what is the shape of widget" + std::to_string(i));
  }
  world.tables = BuildTables(world.kb->store, world.kb->aliases, corpus);
  return world;
}

uint32_t FactBy(const GroupedFactStore& store, std::string_view subject,
                std::string_view rel) {
  for (uint32_t i = 0; i < store.size(); ++i) {
    const GroupedFact& f = store.fact(i);
    if (store.SymbolOf(f.subject) == subject &&
        store.SymbolOf(f.relationship) == rel) {
      return i;
    }
  }
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("BestRankedIndex breaks score ties by symbol order") {
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;

  uint32_t e1_color = FactBy(store, "ent.e1", "toy.color");
  uint32_t e1_shape = FactBy(store, "ent.e1", "toy.shape");
  uint32_t e0_shape = FactBy(store, "ent.e0", "toy.shape");

  std::vector<ScoredFact> scored{
      {e1_shape, 0.5}, {e0_shape, 0.5}, {e1_color, 0.5}};
  // All scores tie; ent.e0 sorts before ent.e1, toy.color before toy.shape.
  CHECK(BestRankedIndex(scored, store) == 1);

  scored[0].score = 0.9;
  CHECK(BestRankedIndex(scored, store) == 0);

  std::vector<ScoredFact> empty;
  CHECK_THROWS_AS(BestRankedIndex(empty, store), std::invalid_argument);
}

TEST_CASE("Answer requires a model and flags missing candidates") {
  EvalWorld world = MakeEvalWorld();
  AnswerOptions options;
  CHECK_THROWS_AS(Answer("what is the color of widget1", world.kb->store,
                         world.tables, world.kb->aliases, options),
                  std::invalid_argument);

  Hyperparams h;
  h.dim = 8;
  EmbeddingModel model(world.tables.vocab.size(), world.tables.symbols.size(),
                       h);
  options.models.push_back(&model);
  Prediction pred = Answer("no such words here", world.kb->store, world.tables,
                           world.kb->aliases, options);
  CHECK(pred.no_candidates);
  CHECK(pred.ranked.empty());
  CHECK(pred.answer_objects.empty());
}

TEST_CASE("Answer ranks candidates exactly like a direct rescoring") {
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;
  WordLists lists = WordLists::Defaults();

  Hyperparams h;
  h.dim = 12;
  h.seed = 31;
  EmbeddingModel first(world.tables.vocab.size(), world.tables.symbols.size(),
                       h);
  h.seed = 32;
  EmbeddingModel second(world.tables.vocab.size(), world.tables.symbols.size(),
                        h);
  h.seed = 33;
  EmbeddingModel subgraph(world.tables.vocab.size(),
                          world.tables.symbols.size(), h);

  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> widget_pick(0, 9);
  for (int round = 0; round < 40; ++round) {
    std::string question = "what is the color of widget" +
                           std::to_string(widget_pick(rng)) + " and widget" +
                           std::to_string(widget_pick(rng));

    AnswerOptions options;
    options.models = {&first, &second};
    bool use_subgraph = round % 2 == 1;
    if (use_subgraph) options.subgraph_model = &subgraph;

    Prediction pred =
        Answer(question, store, world.tables, world.kb->aliases, options);

    CandidateSet cands =
        GenerateCandidates(question, store, world.kb->aliases, lists);
    REQUIRE_FALSE(cands.fact_indices.empty());
    REQUIRE(pred.ranked.size() == cands.fact_indices.size());

    // Same candidate set.
    std::set<uint32_t> got, want(cands.fact_indices.begin(),
                                 cands.fact_indices.end());
    for (const ScoredFact& sf : pred.ranked) got.insert(sf.fact_index);
    CHECK(got == want);

    // Scores match an independent rescoring.
    SparseVector q =
        EncodeQuestion(question, world.tables.vocab, world.kb->aliases);
    for (const ScoredFact& sf : pred.ranked) {
      SparseVector f =
          EncodeFact(store.fact(sf.fact_index), world.tables.symbols, store);
      double expected =
          first.ScoreQa(q, f) + second.ScoreQa(q, f);
      if (use_subgraph) {
        SparseVector sub = EncodeFactSubgraph(store.fact(sf.fact_index),
                                              world.tables.symbols, store);
        expected += subgraph.ScoreQa(q, sub);
      }
      CHECK(sf.score == doctest::Approx(expected).epsilon(1e-12));
    }

    // Ordering: score descending with symbol tie-breaks.
    for (size_t i = 0; i + 1 < pred.ranked.size(); ++i) {
      const ScoredFact& a = pred.ranked[i];
      const ScoredFact& b = pred.ranked[i + 1];
      if (a.score == b.score) {
        const GroupedFact& fa = store.fact(a.fact_index);
        const GroupedFact& fb = store.fact(b.fact_index);
        CHECK(std::tie(store.SymbolOf(fa.subject),
                       store.SymbolOf(fa.relationship)) <=
              std::tie(store.SymbolOf(fb.subject),
                       store.SymbolOf(fb.relationship)));
      } else {
        CHECK(a.score > b.score);
      }
    }

    // The returned answers are the top fact's objects.
    CHECK(pred.answer_objects ==
          store.fact(pred.ranked.front().fact_index).objects);
  }
}

TEST_CASE("EvalF1 scores normalized answer sets") {
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;

  // Prediction 1: top fact e0->color->{e1}, canonical name "widget1".
  Prediction exact;
  exact.ranked.push_back(ScoredFact{FactBy(store, "ent.e0", "toy.color"), 1.0});
  exact.answer_objects = store.fact(exact.ranked[0].fact_index).objects;

  // Prediction 2: objects {e2, e3} against gold {widget2} only.
  Prediction half;
  half.ranked.push_back(ScoredFact{FactBy(store, "ent.e1", "toy.color"), 1.0});
  half.answer_objects = {store.fact(FactBy(store, "ent.e1", "toy.color"))
                             .objects[0],  // e2
                         store.fact(FactBy(store, "ent.e1", "toy.shape"))
                             .objects[0]};  // e3

  // Prediction 3: nothing retrieved.
  Prediction nothing;
  nothing.no_candidates = true;

  std::vector<Prediction> predictions{exact, half, nothing};
  std::vector<std::vector<std::string>> gold{
      {"  WIDGET1!  "},          // normalization folds case and punctuation
      {"widget2"},               // half precision, full recall
      {"widget5"},
  };
  EvalReport report = EvalF1(predictions, gold, store, world.kb->aliases);
  CHECK(report.metric == "f1");
  CHECK(report.evaluated == 3);
  REQUIRE(report.per_question.size() == 3);
  CHECK(report.per_question[0] == doctest::Approx(1.0));
  // precision 1/2, recall 1: F1 = 2/3.
  CHECK(report.per_question[1] == doctest::Approx(2.0 / 3.0));
  CHECK(report.per_question[2] == 0.0);
  CHECK(report.value == doctest::Approx((1.0 + 2.0 / 3.0 + 0.0) / 3.0));

  std::vector<std::vector<std::string>> short_gold{{"x"}};
  CHECK_THROWS_AS(EvalF1(predictions, short_gold, store, world.kb->aliases),
                  std::invalid_argument);
}

TEST_CASE("EvalF1 falls back to entity symbols for nameless entities") {
  std::vector<Triple> triples{{"e.subj", "r.rel", "e.nameless"}};
  std::vector<std::pair<std::string, std::string>> aliases{
      {"e.subj", "subject thing"}};
  auto kb = MakeToyKb(triples, aliases);

  Prediction pred;
  pred.ranked.push_back(ScoredFact{0, 1.0});
  pred.answer_objects = kb->store.fact(0).objects;

  std::vector<Prediction> predictions{pred};
  std::vector<std::vector<std::string>> gold{{"e.nameless"}};
  EvalReport report = EvalF1(predictions, gold, kb->store, kb->aliases);
  CHECK(report.per_question[0] == doctest::Approx(1.0));
}

TEST_CASE("EvalF1 agrees with a set-based reference on random cases") {
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<int> entity_pick(0, 9);
  std::uniform_int_distribution<int> count_pick(1, 4);

  std::vector<Prediction> predictions;
  std::vector<std::vector<std::string>> gold;
  std::vector<double> expected;
  for (int i = 0; i < 100; ++i) {
    Prediction pred;
    pred.ranked.push_back(ScoredFact{0, 1.0});
    std::set<std::string> predicted_names;
    int objects = count_pick(rng);
    for (int j = 0; j < objects; ++j) {
      int e = entity_pick(rng);
      // Recover the entity handle through its only fact as subject.
      EntityId id =
          store.fact(FactBy(store, "ent.e" + std::to_string(e), "toy.color"))
              .subject;
      pred.answer_objects.push_back(id);
      predicted_names.insert("widget" + std::to_string(e));
    }
    std::vector<std::string> answers;
    std::set<std::string> gold_names;
    int num_answers = count_pick(rng);
    for (int j = 0; j < num_answers; ++j) {
      int e = entity_pick(rng);
      answers.push_back("Widget" + std::to_string(e));
      gold_names.insert("widget" + std::to_string(e));
    }
    expected.push_back(OracleSetF1(predicted_names, gold_names));
    predictions.push_back(std::move(pred));
    gold.push_back(std::move(answers));
  }

  EvalReport report = EvalF1(predictions, gold, store, world.kb->aliases);
  double mean = 0.0;
  for (size_t i = 0; i < expected.size(); ++i) {
    CHECK(report.per_question[i] == doctest::Approx(expected[i]));
    mean += expected[i];
  }
  CHECK(report.value == doctest::Approx(mean / expected.size()));
}

TEST_CASE("EvalPathAccuracy accepts any gold subject-relationship pair") {
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;

  uint32_t e0_color = FactBy(store, "ent.e0", "toy.color");
  uint32_t e0_shape = FactBy(store, "ent.e0", "toy.shape");
  uint32_t e1_color = FactBy(store, "ent.e1", "toy.color");

  Prediction right;
  right.ranked.push_back(ScoredFact{e0_color, 0.9});
  right.ranked.push_back(ScoredFact{e1_color, 0.1});
  Prediction wrong;
  wrong.ranked.push_back(ScoredFact{e0_shape, 0.9});
  Prediction missing;
  missing.no_candidates = true;

  std::vector<Prediction> predictions{right, wrong, missing};
  std::vector<QAExample> gold{
      {"q0", {e0_color, e1_color}},
      {"q1", {e0_color}},
      {"q2", {e1_color}},
  };
  EvalReport report = EvalPathAccuracy(predictions, gold, store);
  CHECK(report.metric == "path_accuracy");
  CHECK(report.per_question == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(report.value == doctest::Approx(1.0 / 3.0));

  std::vector<QAExample> short_gold{{"q0", {e0_color}}};
  CHECK_THROWS_AS(EvalPathAccuracy(predictions, short_gold, store),
                  std::invalid_argument);
}

TEST_CASE("EvalPathAccuracy matches on the pair, not the fact index") {
  // Two facts share subject and relationship only if they were grouped, so
  // construct a gold example pointing at a different fact with the same
  // subject but another relationship to prove mismatch.
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;
  uint32_t e3_color = FactBy(store, "ent.e3", "toy.color");
  uint32_t e3_shape = FactBy(store, "ent.e3", "toy.shape");

  Prediction pred;
  pred.ranked.push_back(ScoredFact{e3_color, 1.0});
  std::vector<Prediction> predictions{pred};

  std::vector<QAExample> gold_same{{"q", {e3_color}}};
  CHECK(EvalPathAccuracy(predictions, gold_same, store).value == 1.0);
  std::vector<QAExample> gold_other{{"q", {e3_shape}}};
  CHECK(EvalPathAccuracy(predictions, gold_other, store).value == 0.0);
}

TEST_CASE("LoadRerankFile groups lines by question string") {
  TempDir dir;
  std::string path = dir.File("rerank.tsv");
  WriteFile(path,
            "# header\n"
            "q one\ts1\tr1\to1\t0\n"
            "q two\ts2\tr2\to2\t1\n"
            "q one\ts3\tr3\to3\t1\n"
            "\n");
  std::vector<RerankQuestion> questions = LoadRerankFile(path);
  REQUIRE(questions.size() == 2);
  CHECK(questions[0].question == "q one");
  REQUIRE(questions[0].candidates.size() == 2);
  CHECK_FALSE(questions[0].candidates[0].correct);
  CHECK(questions[0].candidates[1].correct);
  CHECK(questions[0].candidates[1].fact ==
        ExternalFactInput{"s3", "r3", "o3"});
  CHECK(questions[1].candidates.size() == 1);

  std::string bad_label = dir.File("bad_label.tsv");
  WriteFile(bad_label, "q\ts\tr\to\t2\n");
  CHECK_THROWS_WITH_AS(LoadRerankFile(bad_label),
                       doctest::Contains("bad_label.tsv:1"),
                       std::runtime_error);

  std::string bad_cols = dir.File("bad_cols.tsv");
  WriteFile(bad_cols, "q\ts\tr\to\n");
  CHECK_THROWS_AS(LoadRerankFile(bad_cols), std::runtime_error);
  CHECK_THROWS_AS(LoadRerankFile(dir.File("missing.tsv")),
                  std::runtime_error);
}

TEST_CASE("EvalRerank picks the argmax external score per question") {
  EvalWorld world = MakeEvalWorld();
  const GroupedFactStore& store = world.kb->store;

  Hyperparams h;
  h.dim = 10;
  h.seed = 41;
  EmbeddingModel model(world.tables.vocab.size(), world.tables.symbols.size(),
                       h);
  std::string before;
  {
    std::ostringstream out;
    model.Save(out);
    before = out.str();
  }

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> widget_pick(0, 9);
  std::uniform_int_distribution<int> cand_pick(1, 4);
  std::vector<RerankQuestion> questions;
  for (int i = 0; i < 30; ++i) {
    RerankQuestion rq;
    rq.question =
        "what is the color of widget" + std::to_string(widget_pick(rng));
    int cands = cand_pick(rng);
    for (int c = 0; c < cands; ++c) {
      RerankCandidate candidate;
      candidate.fact.subject = "widget" + std::to_string(widget_pick(rng));
      candidate.fact.relation = "has color";
      candidate.fact.object = "widget" + std::to_string(widget_pick(rng));
      candidate.correct = c == 0;  // first candidate labeled correct
      rq.candidates.push_back(std::move(candidate));
    }
    questions.push_back(std::move(rq));
  }
  questions.push_back(RerankQuestion{"empty question", {}});

  EvalReport report = EvalRerank(questions, model, store, world.kb->aliases,
                                 world.tables);
  CHECK(report.metric == "rerank_accuracy");
  CHECK(report.evaluated == 30);
  CHECK(report.skipped == 1);

  // Reference: rescore every candidate through the same encoders.
  size_t correct = 0;
  size_t at = 0;
  for (const RerankQuestion& rq : questions) {
    if (rq.candidates.empty()) continue;
    SparseVector q =
        EncodeQuestion(rq.question, world.tables.vocab, world.kb->aliases);
    size_t best = 0;
    double best_score = 0.0;
    for (size_t c = 0; c < rq.candidates.size(); ++c) {
      const ExternalFactInput& fact = rq.candidates[c].fact;
      SparseVector enc = EncodeExternalFact(
          fact.subject, LinkEntity(fact.subject, world.kb->aliases, store),
          fact.relation, fact.object,
          LinkEntity(fact.object, world.kb->aliases, store),
          world.tables.symbols, world.tables.vocab);
      double score = model.ScoreExternal(q, enc);
      if (c == 0 || score > best_score) {
        best = c;
        best_score = score;
      }
    }
    bool ok = rq.candidates[best].correct;
    CHECK(report.per_question[at] == (ok ? 1.0 : 0.0));
    if (ok) ++correct;
    ++at;
  }
  CHECK(report.value == doctest::Approx(double(correct) / 30.0));

  // Reranking never mutates the model.
  std::ostringstream after;
  model.Save(after);
  CHECK(after.str() == before);
}

TEST_CASE("EvalRerank keeps the earliest candidate on exact ties") {
  EvalWorld world = MakeEvalWorld();
  Hyperparams h;
  h.dim = 6;
  h.seed = 10;
  EmbeddingModel model(world.tables.vocab.size(), world.tables.symbols.size(),
                       h);

  RerankQuestion rq;
  rq.question = "what is the color of widget3";
  // Identical fact strings encode identically, so the scores tie exactly.
  for (int c = 0; c < 3; ++c) {
    rq.candidates.push_back(RerankCandidate{
        ExternalFactInput{"widget3", "has color", "widget4"}, c == 0});
  }
  std::vector<RerankQuestion> questions{rq};
  CHECK(EvalRerank(questions, model, world.kb->store, world.kb->aliases,
                   world.tables)
            .value == 1.0);

  // Moving the correct label off the first candidate flips the outcome.
  questions[0].candidates[0].correct = false;
  questions[0].candidates[2].correct = true;
  CHECK(EvalRerank(questions, model, world.kb->store, world.kb->aliases,
                   world.tables)
            .value == 0.0);
}

TEST_CASE("RerankRandomBaseline averages inverse candidate counts") {
  RerankCandidate c;
  std::vector<RerankQuestion> questions;
  questions.push_back(RerankQuestion{"a", {c, c, c}});
  questions.push_back(RerankQuestion{"b", {c, c}});
  questions.push_back(RerankQuestion{"c", {}});  // skipped
  CHECK(RerankRandomBaseline(questions) ==
        doctest::Approx((1.0 / 3.0 + 1.0 / 2.0) / 2.0));

  std::vector<RerankQuestion> empty;
  CHECK(RerankRandomBaseline(empty) == 0.0);
  std::vector<RerankQuestion> all_empty{RerankQuestion{"a", {}}};
  CHECK(RerankRandomBaseline(all_empty) == 0.0);
}
