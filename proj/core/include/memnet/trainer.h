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

#ifndef MEMNET_CORE_TRAINER_H_
#define MEMNET_CORE_TRAINER_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "memnet/candidate_gen.h"
#include "memnet/encoder.h"
#include "memnet/kb_store.h"
#include "memnet/model.h"
#include "memnet/qa_dataset.h"
#include "memnet/supervision.h"

namespace memnet {

// Which ranking task a triple belongs to. The question side always embeds
// through the vocabulary matrix; the fact side embeds through the symbol
// matrix for kQa and through the vocabulary matrix for kParaphrase.
enum class LossKind : uint8_t { kQa, kParaphrase };

// Margin ranking loss: max(0, margin - S(q, pos) + S(q, neg)).
double LossQa(const SparseVector& question, const SparseVector& pos,
              const SparseVector& neg, const EmbeddingModel& model);
double LossParaphrase(const SparseVector& q, const SparseVector& pos,
                      const SparseVector& neg, const EmbeddingModel& model);

// Gradient of the margin loss with respect to every touched column,
// expressed as coefficients over the three dense partials: the gradient of
// column c is coef[0]*d_question + coef[1]*d_pos + coef[2]*d_neg. Columns
// shared between sides accumulate coefficients, which keeps the gradient
// exact when the positive and negative overlap or when both sides route
// through the same matrix.
struct ColumnGradient {
  Matrix matrix;
  uint32_t column;
  std::array<double, 3> coef;
};

struct MarginGradients {
  double loss = 0.0;
  std::vector<double> d_question;
  std::vector<double> d_pos;
  std::vector<double> d_neg;
  std::vector<ColumnGradient> columns;

  // Materializes the gradient of one touched column.
  std::vector<double> ColumnGrad(size_t i) const;
};

// Computes loss and exact analytic gradients at the current parameters.
// When the loss is not positive, the gradient lists are empty. Zero-norm
// embeddings contribute no gradient (their score is the constant 0).
MarginGradients ComputeMarginGradients(const SparseVector& question,
                                       const SparseVector& pos,
                                       const SparseVector& neg,
                                       const EmbeddingModel& model,
                                       LossKind kind);

// One SGD step on a violating triple: per-entry Adagrad with epsilon 1e-8
// over the exact gradients, then projection of every touched column back
// into the unit ball. No-op when the loss is not positive. Returns the loss
// at the pre-step parameters.
double GradStep(const SparseVector& question, const SparseVector& pos,
                const SparseVector& neg, EmbeddingModel& model, LossKind kind);

enum class FactElement : uint8_t { kSubject = 0, kRelationship = 1, kObjects = 2 };

struct NegativeDraw {
  GroupedFact fact;
  FactElement first;       // which element was corrupted first
  bool corrupted_second = false;
};

// Corrupts the gold fact: picks one of subject, relationship, or object set
// uniformly and swaps in the corresponding element of a uniformly chosen
// store fact; with probability multi_corrupt_prob repeats on a second,
// distinct element. Guaranteed to differ from the gold fact: resamples up
// to 20 times, then falls back to deterministic subject corruption.
NegativeDraw SampleNegativeDefault(const GroupedFact& gold,
                                   const GroupedFactStore& store,
                                   double multi_corrupt_prob,
                                   std::mt19937_64& rng);

// Uniform draw from the candidate facts minus the gold fact. Falls back to
// SampleNegativeDefault when nothing remains.
GroupedFact SampleNegativeCandidates(uint32_t gold_index,
                                     const CandidateSet& candidates,
                                     const GroupedFactStore& store,
                                     double multi_corrupt_prob,
                                     std::mt19937_64& rng,
                                     bool* used_fallback = nullptr);

struct WarpResult {
  std::optional<SparseVector> negative;  // first violating negative, if any
  uint32_t draws = 0;
  double loss = 0.0;  // loss of the violating triple
};

// Draws negatives until one violates the margin (loss > 0), up to max_trials
// draws. The update that follows a found violator is the plain margin step,
// independent of how many draws it took.
template <typename DrawNegative>
WarpResult WarpFindViolator(const SparseVector& question,
                            const SparseVector& pos,
                            const EmbeddingModel& model, LossKind kind,
                            uint32_t max_trials, DrawNegative&& draw) {
  const Matrix fact_side =
      kind == LossKind::kQa ? Matrix::kSymbols : Matrix::kVocab;
  std::vector<double> q = model.Embed(Matrix::kVocab, question);
  std::vector<double> p = model.Embed(fact_side, pos);
  const double positive_score = CosineSimilarity(q, p);
  const double margin = model.hyper().margin;

  WarpResult result;
  std::vector<double> n(model.dim());
  for (uint32_t trial = 0; trial < max_trials; ++trial) {
    SparseVector neg = draw();
    ++result.draws;
    model.EmbedInto(fact_side, neg, n);
    double loss = margin - positive_score + CosineSimilarity(q, n);
    if (loss > 0.0) {
      result.negative = std::move(neg);
      result.loss = loss;
      return result;
    }
  }
  return result;
}

// Multitask step chooser: paraphrase with fixed probability when clusters
// exist, otherwise a uniformly chosen QA source.
class TaskSchedule {
 public:
  TaskSchedule(size_t num_qa_sources, bool has_paraphrases,
               double paraphrase_prob);

  struct Pick {
    bool paraphrase = false;
    size_t source = 0;
  };
  Pick Sample(std::mt19937_64& rng) const;

 private:
  size_t num_qa_sources_;
  bool has_paraphrases_;
  double paraphrase_prob_;
};

enum class NegativePolicy : uint8_t { kDefault, kCandidates };
enum class EvalMetric : uint8_t { kPathAccuracy, kF1 };

struct TrainDataset {
  std::string name;
  bool synthetic = false;  // synthetic sources always use default negatives
  std::vector<QAExample> examples;
};

struct TrainConfig {
  Hyperparams hyper;
  NegativePolicy policy = NegativePolicy::kDefault;
  uint32_t threads = 1;
  // Steps between validation evaluations; 0 means the size of the smallest
  // QA source.
  uint64_t eval_every = 0;
  uint32_t patience = 5;
  uint64_t max_steps = 0;  // 0 means no cap
  EvalMetric metric = EvalMetric::kPathAccuracy;
  const WordLists* lists = nullptr;  // null means built-in defaults
  // Optional warm start; must match the table shapes.
  const EmbeddingModel* init_model = nullptr;
  bool verbose = false;
};

struct EvalPoint {
  uint64_t step;
  double metric;
};

struct TaskCounters {
  uint64_t qa_steps = 0;
  uint64_t paraphrase_steps = 0;
  uint64_t violations = 0;        // steps that found a violator and updated
  uint64_t exhausted_searches = 0;  // steps whose violator search came up empty
  std::vector<uint64_t> per_source;
};

struct TrainState {
  EmbeddingModel model;  // best model by validation metric
  uint64_t steps = 0;
  double best_metric = 0.0;
  std::vector<EvalPoint> trace;  // includes the pre-training evaluation
  TaskCounters counters;
};

// Multitask training with periodic validation and early stopping
// (patience evaluations without improvement). The returned model is the
// best snapshot, whose metric equals the maximum of the trace. With
// threads > 1 workers share the model without locks; single-thread runs
// are bit-for-bit reproducible for a fixed seed.
TrainState Train(const std::vector<TrainDataset>& sources,
                 const ParaphraseSet* paraphrases,
                 const GroupedFactStore& store, const EncoderTables& tables,
                 const AliasIndex& aliases,
                 std::span<const QAExample> validation,
                 const TrainConfig& config);

}  // namespace memnet

#endif  // MEMNET_CORE_TRAINER_H_
