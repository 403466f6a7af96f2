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

#ifndef MEMNET_CORE_EVAL_ANSWER_H_
#define MEMNET_CORE_EVAL_ANSWER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memnet/candidate_gen.h"
#include "memnet/encoder.h"
#include "memnet/kb_store.h"
#include "memnet/memory_extend.h"
#include "memnet/model.h"
#include "memnet/qa_dataset.h"

namespace memnet {

struct ScoredFact {
  uint32_t fact_index;
  double score;
  bool operator==(const ScoredFact&) const = default;
};

// Position of the best fact: highest score, ties broken by the (subject,
// relationship) symbol strings. Requires a nonempty span.
size_t BestRankedIndex(std::span<const ScoredFact> scored,
                       const GroupedFactStore& store);

struct Prediction {
  // All candidates, best first (score descending, ties by subject then
  // relationship symbol order).
  std::vector<ScoredFact> ranked;
  // Objects of the top fact; empty when there were no candidates.
  std::vector<EntityId> answer_objects;
  bool no_candidates = false;
};

struct AnswerOptions {
  // One model scores directly; several form an ensemble (scores sum).
  std::vector<const EmbeddingModel*> models;
  // Optional second scorer over neighborhood encodings; its score adds to
  // the ensemble sum.
  const EmbeddingModel* subgraph_model = nullptr;
  const WordLists* lists = nullptr;  // null means built-in defaults
};

// Candidate generation plus scoring. Deterministic under ties.
Prediction Answer(std::string_view question, const GroupedFactStore& store,
                  const EncoderTables& tables, const AliasIndex& aliases,
                  const AnswerOptions& options);

struct EvalReport {
  std::string metric;
  double value = 0.0;
  size_t evaluated = 0;
  size_t skipped = 0;
  std::vector<double> per_question;
};

// Mean F1 between predicted and gold answer-string sets, compared after
// normalization. Predicted strings are the canonical names of the top
// fact's objects (an entity without an alias falls back to its symbol).
EvalReport EvalF1(std::span<const Prediction> predictions,
                  std::span<const std::vector<std::string>> gold_answers,
                  const GroupedFactStore& store, const AliasIndex& aliases);

// Fraction of questions whose top fact matches a gold (subject,
// relationship) pair.
EvalReport EvalPathAccuracy(std::span<const Prediction> predictions,
                            std::span<const QAExample> gold,
                            const GroupedFactStore& store);

// One question of a reranking evaluation: labeled external candidates.
struct RerankCandidate {
  ExternalFactInput fact;
  bool correct = false;
};
struct RerankQuestion {
  std::string question;
  std::vector<RerankCandidate> candidates;
};

// Reads "question<TAB>subject<TAB>relation<TAB>object<TAB>label" lines with
// label 0 or 1. Lines sharing a question string form one group.
std::vector<RerankQuestion> LoadRerankFile(const std::string& path);

// Picks the candidate with the highest external score per question (ties
// keep the earliest) and reports the fraction labeled correct. Questions
// without candidates are skipped and counted. Reranking never mutates the
// model or the store.
EvalReport EvalRerank(std::span<const RerankQuestion> questions,
                      const EmbeddingModel& model,
                      const GroupedFactStore& store, const AliasIndex& aliases,
                      const EncoderTables& tables);

// Expected accuracy of picking uniformly at random: the mean of
// 1 / #candidates over evaluated questions.
double RerankRandomBaseline(std::span<const RerankQuestion> questions);

}  // namespace memnet

#endif  // MEMNET_CORE_EVAL_ANSWER_H_
