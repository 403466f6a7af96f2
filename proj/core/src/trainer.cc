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

#include "memnet/trainer.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "memnet/eval_answer.h"
#include "memnet/text.h"

namespace memnet {
namespace {

constexpr double kAdagradEpsilon = 1e-8;

double Margin(const EmbeddingModel& model) { return model.hyper().margin; }

double Norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (size_t k = 0; k < a.size(); ++k) d += a[k] * b[k];
  return d;
}

}  // namespace

double LossQa(const SparseVector& question, const SparseVector& pos,
              const SparseVector& neg, const EmbeddingModel& model) {
  double value =
      Margin(model) - model.ScoreQa(question, pos) + model.ScoreQa(question, neg);
  return std::max(0.0, value);
}

double LossParaphrase(const SparseVector& q, const SparseVector& pos,
                      const SparseVector& neg, const EmbeddingModel& model) {
  double value = Margin(model) - model.ScoreParaphrase(q, pos) +
                 model.ScoreParaphrase(q, neg);
  return std::max(0.0, value);
}

std::vector<double> MarginGradients::ColumnGrad(size_t i) const {
  const ColumnGradient& c = columns.at(i);
  std::vector<double> grad(d_question.size(), 0.0);
  for (size_t k = 0; k < grad.size(); ++k) {
    grad[k] = c.coef[0] * d_question[k] + c.coef[1] * d_pos[k] +
              c.coef[2] * d_neg[k];
  }
  return grad;
}

MarginGradients ComputeMarginGradients(const SparseVector& question,
                                       const SparseVector& pos,
                                       const SparseVector& neg,
                                       const EmbeddingModel& model,
                                       LossKind kind) {
  const Matrix fact_side =
      kind == LossKind::kQa ? Matrix::kSymbols : Matrix::kVocab;
  const uint32_t d = model.dim();

  MarginGradients g;
  std::vector<double> u = model.Embed(Matrix::kVocab, question);
  std::vector<double> p = model.Embed(fact_side, pos);
  std::vector<double> n = model.Embed(fact_side, neg);

  const double nu = Norm(u);
  const double np = Norm(p);
  const double nn = Norm(n);
  const double cos_p = (nu > 0.0 && np > 0.0) ? Dot(u, p) / (nu * np) : 0.0;
  const double cos_n = (nu > 0.0 && nn > 0.0) ? Dot(u, n) / (nu * nn) : 0.0;

  g.loss = Margin(model) - cos_p + cos_n;
  if (g.loss <= 0.0) return g;

  g.d_question.assign(d, 0.0);
  g.d_pos.assign(d, 0.0);
  g.d_neg.assign(d, 0.0);

  // d cos(u, v) / du = v / (|u||v|) - cos(u, v) * u / |u|^2, and the
  // symmetric expression for v. A zero-norm side has constant score 0 and
  // contributes nothing.
  if (nu > 0.0 && np > 0.0) {
    for (uint32_t k = 0; k < d; ++k) {
      g.d_question[k] -= p[k] / (nu * np) - cos_p * u[k] / (nu * nu);
      g.d_pos[k] -= u[k] / (nu * np) - cos_p * p[k] / (np * np);
    }
  }
  if (nu > 0.0 && nn > 0.0) {
    for (uint32_t k = 0; k < d; ++k) {
      g.d_question[k] += n[k] / (nu * nn) - cos_n * u[k] / (nu * nu);
      g.d_neg[k] += u[k] / (nu * nn) - cos_n * n[k] / (nn * nn);
    }
  }

  auto add_coef = [&g](Matrix m, uint32_t column, int slot, double weight) {
    for (ColumnGradient& c : g.columns) {
      if (c.matrix == m && c.column == column) {
        c.coef[slot] += weight;
        return;
      }
    }
    ColumnGradient c{m, column, {0.0, 0.0, 0.0}};
    c.coef[slot] = weight;
    g.columns.push_back(c);
  };
  for (const SparseVector::Entry& e : question.entries) {
    add_coef(Matrix::kVocab, e.index, 0, e.weight);
  }
  for (const SparseVector::Entry& e : pos.entries) {
    add_coef(fact_side, e.index, 1, e.weight);
  }
  for (const SparseVector::Entry& e : neg.entries) {
    add_coef(fact_side, e.index, 2, e.weight);
  }
  return g;
}

double GradStep(const SparseVector& question, const SparseVector& pos,
                const SparseVector& neg, EmbeddingModel& model,
                LossKind kind) {
  MarginGradients g = ComputeMarginGradients(question, pos, neg, model, kind);
  if (g.loss <= 0.0) return std::max(0.0, g.loss);

  const uint32_t d = model.dim();
  const double lr = model.hyper().learning_rate;
  for (const ColumnGradient& c : g.columns) {
    float* w = model.column(c.matrix, c.column);
    float* acc = model.adagrad_column(c.matrix, c.column);
    for (uint32_t k = 0; k < d; ++k) {
      const double grad = c.coef[0] * g.d_question[k] + c.coef[1] * g.d_pos[k] +
                          c.coef[2] * g.d_neg[k];
      if (grad == 0.0) continue;
      const float updated =
          static_cast<float>(static_cast<double>(acc[k]) + grad * grad);
      acc[k] = updated;
      w[k] -= static_cast<float>(
          lr * grad / std::sqrt(static_cast<double>(updated) + kAdagradEpsilon));
    }
    model.ProjectColumn(c.matrix, c.column);
  }
  return g.loss;
}

namespace {

void ApplyElement(GroupedFact& fact, FactElement element,
                  const GroupedFact& donor) {
  switch (element) {
    case FactElement::kSubject:
      fact.subject = donor.subject;
      break;
    case FactElement::kRelationship:
      fact.relationship = donor.relationship;
      break;
    case FactElement::kObjects:
      fact.objects = donor.objects;
      break;
  }
}

}  // namespace

NegativeDraw SampleNegativeDefault(const GroupedFact& gold,
                                   const GroupedFactStore& store,
                                   double multi_corrupt_prob,
                                   std::mt19937_64& rng) {
  if (store.size() == 0) {
    throw std::invalid_argument("cannot sample negatives from an empty store");
  }
  std::uniform_int_distribution<uint32_t> fact_pick(
      0, static_cast<uint32_t>(store.size() - 1));
  std::uniform_int_distribution<int> element_pick(0, 2);
  std::bernoulli_distribution multi(multi_corrupt_prob);
  std::uniform_int_distribution<int> other_pick(0, 1);

  for (int attempt = 0; attempt < 20; ++attempt) {
    GroupedFact neg = gold;
    const FactElement first = static_cast<FactElement>(element_pick(rng));
    ApplyElement(neg, first, store.fact(fact_pick(rng)));

    bool second = multi(rng);
    if (second) {
      // A distinct element, uniform over the remaining two.
      int offset = other_pick(rng) + 1;
      const FactElement second_element =
          static_cast<FactElement>((static_cast<int>(first) + offset) % 3);
      ApplyElement(neg, second_element, store.fact(fact_pick(rng)));
    }
    if (!(neg == gold)) {
      return NegativeDraw{std::move(neg), first, second};
    }
  }

  // Deterministic fallback: swap in the first entity that differs.
  for (EntityId e : store.entities()) {
    if (e != gold.subject) {
      GroupedFact neg = gold;
      neg.subject = e;
      return NegativeDraw{std::move(neg), FactElement::kSubject, false};
    }
  }
  throw std::logic_error("store has a single entity; no negative exists");
}

GroupedFact SampleNegativeCandidates(uint32_t gold_index,
                                     const CandidateSet& candidates,
                                     const GroupedFactStore& store,
                                     double multi_corrupt_prob,
                                     std::mt19937_64& rng,
                                     bool* used_fallback) {
  std::vector<uint32_t> pool;
  pool.reserve(candidates.fact_indices.size());
  for (uint32_t idx : candidates.fact_indices) {
    if (idx != gold_index) pool.push_back(idx);
  }
  if (pool.empty()) {
    if (used_fallback != nullptr) *used_fallback = true;
    return SampleNegativeDefault(store.fact(gold_index), store,
                                 multi_corrupt_prob, rng)
        .fact;
  }
  if (used_fallback != nullptr) *used_fallback = false;
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  return store.fact(pool[pick(rng)]);
}

TaskSchedule::TaskSchedule(size_t num_qa_sources, bool has_paraphrases,
                           double paraphrase_prob)
    : num_qa_sources_(num_qa_sources),
      has_paraphrases_(has_paraphrases),
      paraphrase_prob_(paraphrase_prob) {
  if (num_qa_sources_ == 0 && !has_paraphrases_) {
    throw std::invalid_argument("schedule needs at least one task");
  }
  if (paraphrase_prob_ < 0.0 || paraphrase_prob_ >= 1.0) {
    throw std::invalid_argument("paraphrase probability must be in [0, 1)");
  }
}

TaskSchedule::Pick TaskSchedule::Sample(std::mt19937_64& rng) const {
  if (has_paraphrases_) {
    if (num_qa_sources_ == 0) return Pick{true, 0};
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < paraphrase_prob_) return Pick{true, 0};
  }
  std::uniform_int_distribution<size_t> pick(0, num_qa_sources_ - 1);
  return Pick{false, pick(rng)};
}

namespace {

struct PreppedExample {
  SparseVector question;
  std::vector<uint32_t> fact_indices;
  std::vector<SparseVector> gold_vecs;
  std::vector<uint32_t> negative_pool;  // candidate indices minus the golds
};

struct PreppedSource {
  bool synthetic = false;
  std::vector<PreppedExample> examples;
};

struct ValidationEntry {
  SparseVector question;
  bool no_candidates = false;
  std::vector<uint32_t> candidate_indices;
  std::vector<SparseVector> candidate_vecs;
  std::vector<std::pair<uint32_t, uint32_t>> gold_paths;  // (subject, rel)
  StringSet gold_strings;                       // F1 metric
  std::vector<StringSet> candidate_strings;     // parallel to candidates
};

std::mt19937_64 MakeRng(uint64_t seed, uint64_t chunk, uint32_t worker) {
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(chunk),
                    static_cast<uint32_t>(chunk >> 32), worker};
  return std::mt19937_64(seq);
}

std::string EntityAnswerString(EntityId e, const GroupedFactStore& store,
                               const AliasIndex& aliases) {
  std::optional<std::string_view> name = aliases.CanonicalName(e);
  return NormalizeText(name.has_value() ? std::string(*name)
                                        : store.SymbolOf(e));
}

// Shared state of one training run. Workers mutate the model concurrently
// without locks; everything else is read-only while steps run.
class TrainRun {
 public:
  TrainRun(const std::vector<TrainDataset>& sources,
           const ParaphraseSet* paraphrases, const GroupedFactStore& store,
           const EncoderTables& tables, const AliasIndex& aliases,
           std::span<const QAExample> validation, const TrainConfig& config)
      : store_(store),
        tables_(tables),
        aliases_(aliases),
        config_(config),
        paraphrases_(paraphrases),
        lists_(config.lists != nullptr ? *config.lists : WordLists::Defaults()),
        schedule_(sources.size(),
                  paraphrases != nullptr && paraphrases->num_clusters() > 0,
                  config.hyper.paraphrase_prob),
        model_(MakeInitialModel(tables, config)) {
    PrepSources(sources);
    PrepParaphrases();
    PrepValidation(validation);
    counters_.per_source.assign(sources.size(), 0);
  }

  TrainState Run() {
    const bool have_validation = !validation_.empty();
    if (!have_validation && config_.max_steps == 0) {
      throw std::invalid_argument(
          "training without validation requires a step cap");
    }

    TrainState state;
    EmbeddingModel best = model_;
    double best_metric = 0.0;
    if (have_validation) {
      best_metric = Evaluate();
      state.trace.push_back(EvalPoint{0, best_metric});
    }

    uint64_t total = 0;
    uint32_t bad_evals = 0;
    uint64_t chunk_index = 0;
    while (true) {
      if (config_.max_steps > 0 && total >= config_.max_steps) break;
      if (have_validation && bad_evals >= config_.patience) break;

      uint64_t chunk = eval_every_;
      if (config_.max_steps > 0) {
        chunk = std::min(chunk, config_.max_steps - total);
      }
      RunChunk(chunk, chunk_index++);
      total += chunk;

      if (!have_validation) continue;
      double metric = Evaluate();
      state.trace.push_back(EvalPoint{total, metric});
      if (config_.verbose) {
        std::cerr << "step " << total << " metric " << metric << '\n';
      }
      if (metric > best_metric) {
        best_metric = metric;
        best = model_;
        bad_evals = 0;
      } else {
        ++bad_evals;
      }
    }

    state.model = have_validation ? std::move(best) : std::move(model_);
    state.steps = total;
    state.best_metric = best_metric;
    state.counters = std::move(counters_);
    return state;
  }

 private:
  static EmbeddingModel MakeInitialModel(const EncoderTables& tables,
                                         const TrainConfig& config) {
    if (config.init_model != nullptr) {
      const EmbeddingModel& init = *config.init_model;
      if (init.num_vocab() != tables.vocab.size() ||
          init.num_symbols() != tables.symbols.size()) {
        throw std::invalid_argument("warm-start model does not match tables");
      }
      EmbeddingModel copy = init;
      copy.mutable_hyper() = config.hyper;
      return copy;
    }
    return EmbeddingModel(tables.vocab.size(), tables.symbols.size(),
                          config.hyper);
  }

  void PrepSources(const std::vector<TrainDataset>& sources) {
    // Facts drawn as candidate negatives are encoded once, shared.
    std::unordered_map<uint32_t, size_t> encoded_index;
    size_t min_examples = SIZE_MAX;

    for (const TrainDataset& src : sources) {
      if (src.examples.empty()) {
        throw std::invalid_argument("training source '" + src.name +
                                    "' is empty");
      }
      min_examples = std::min(min_examples, src.examples.size());
      PreppedSource prepped;
      prepped.synthetic = src.synthetic;
      prepped.examples.reserve(src.examples.size());
      for (const QAExample& ex : src.examples) {
        PreppedExample pe;
        pe.question = EncodeQuestion(ex.question, tables_.vocab, aliases_);
        pe.fact_indices = ex.fact_indices;
        for (uint32_t idx : ex.fact_indices) {
          pe.gold_vecs.push_back(
              EncodeFact(store_.fact(idx), tables_.symbols, store_));
        }
        if (config_.policy == NegativePolicy::kCandidates && !src.synthetic) {
          CandidateSet cands =
              GenerateCandidates(ex.question, store_, aliases_, lists_);
          for (uint32_t idx : cands.fact_indices) {
            if (std::find(ex.fact_indices.begin(), ex.fact_indices.end(),
                          idx) != ex.fact_indices.end()) {
              continue;
            }
            pe.negative_pool.push_back(idx);
            auto [it, inserted] =
                encoded_index.emplace(idx, candidate_vecs_.size());
            if (inserted) {
              candidate_vecs_.push_back(
                  EncodeFact(store_.fact(idx), tables_.symbols, store_));
            }
          }
        }
        prepped.examples.push_back(std::move(pe));
      }
      sources_.push_back(std::move(prepped));
    }
    candidate_slot_ = std::move(encoded_index);

    eval_every_ = config_.eval_every;
    if (eval_every_ == 0) {
      eval_every_ = min_examples == SIZE_MAX ? 1024 : min_examples;
    }
  }

  void PrepParaphrases() {
    if (paraphrases_ == nullptr) return;
    para_vecs_.reserve(paraphrases_->total_questions());
    for (size_t i = 0; i < paraphrases_->total_questions(); ++i) {
      para_vecs_.push_back(
          EncodeQuestion(paraphrases_->question(i), tables_.vocab, aliases_));
    }
  }

  void PrepValidation(std::span<const QAExample> validation) {
    for (const QAExample& ex : validation) {
      ValidationEntry entry;
      entry.question = EncodeQuestion(ex.question, tables_.vocab, aliases_);
      for (uint32_t idx : ex.fact_indices) {
        const GroupedFact& g = store_.fact(idx);
        entry.gold_paths.emplace_back(g.subject.value, g.relationship.value);
        if (config_.metric == EvalMetric::kF1) {
          for (EntityId o : g.objects) {
            entry.gold_strings.insert(EntityAnswerString(o, store_, aliases_));
          }
        }
      }
      CandidateSet cands =
          GenerateCandidates(ex.question, store_, aliases_, lists_);
      entry.no_candidates = cands.fact_indices.empty();
      for (uint32_t idx : cands.fact_indices) {
        entry.candidate_indices.push_back(idx);
        entry.candidate_vecs.push_back(
            EncodeFact(store_.fact(idx), tables_.symbols, store_));
        if (config_.metric == EvalMetric::kF1) {
          StringSet strings;
          for (EntityId o : store_.fact(idx).objects) {
            strings.insert(EntityAnswerString(o, store_, aliases_));
          }
          entry.candidate_strings.push_back(std::move(strings));
        }
      }
      validation_.push_back(std::move(entry));
    }
  }

  double Evaluate() const {
    if (validation_.empty()) return 0.0;
    double sum = 0.0;
    std::vector<ScoredFact> scored;
    for (const ValidationEntry& entry : validation_) {
      if (entry.no_candidates) continue;  // scores 0
      scored.clear();
      for (size_t i = 0; i < entry.candidate_indices.size(); ++i) {
        scored.push_back(
            ScoredFact{entry.candidate_indices[i],
                       model_.ScoreQa(entry.question, entry.candidate_vecs[i])});
      }
      size_t best = BestRankedIndex(scored, store_);

      if (config_.metric == EvalMetric::kPathAccuracy) {
        const GroupedFact& top = store_.fact(scored[best].fact_index);
        for (const auto& [s, r] : entry.gold_paths) {
          if (top.subject.value == s && top.relationship.value == r) {
            sum += 1.0;
            break;
          }
        }
      } else {
        const StringSet& predicted = entry.candidate_strings[best];
        size_t hit = 0;
        for (const std::string& p : predicted) {
          if (entry.gold_strings.count(p) > 0) ++hit;
        }
        if (hit > 0 && !predicted.empty() && !entry.gold_strings.empty()) {
          double precision = static_cast<double>(hit) / predicted.size();
          double recall = static_cast<double>(hit) / entry.gold_strings.size();
          sum += 2.0 * precision * recall / (precision + recall);
        }
      }
    }
    return sum / static_cast<double>(validation_.size());
  }

  void RunChunk(uint64_t steps, uint64_t chunk_index) {
    if (config_.threads <= 1) {
      std::mt19937_64 rng = MakeRng(config_.hyper.seed, chunk_index, 0);
      RunSteps(steps, rng, counters_);
      return;
    }
    const uint32_t workers = config_.threads;
    std::vector<TaskCounters> local(workers);
    for (TaskCounters& c : local) {
      c.per_source.assign(sources_.size(), 0);
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const uint64_t base = steps / workers;
    const uint64_t rem = steps % workers;
    for (uint32_t w = 0; w < workers; ++w) {
      uint64_t n = base + (w < rem ? 1 : 0);
      threads.emplace_back([this, n, chunk_index, w, &local] {
        std::mt19937_64 rng = MakeRng(config_.hyper.seed, chunk_index, w + 1);
        RunSteps(n, rng, local[w]);
      });
    }
    for (std::thread& t : threads) t.join();
    for (const TaskCounters& c : local) {
      counters_.qa_steps += c.qa_steps;
      counters_.paraphrase_steps += c.paraphrase_steps;
      counters_.violations += c.violations;
      counters_.exhausted_searches += c.exhausted_searches;
      for (size_t i = 0; i < c.per_source.size(); ++i) {
        counters_.per_source[i] += c.per_source[i];
      }
    }
  }

  void RunSteps(uint64_t steps, std::mt19937_64& rng, TaskCounters& counters) {
    const uint32_t max_trials = config_.hyper.warp_max_trials;
    const double multi = config_.hyper.multi_corrupt_prob;

    for (uint64_t step = 0; step < steps; ++step) {
      TaskSchedule::Pick pick = schedule_.Sample(rng);
      if (pick.paraphrase) {
        ++counters.paraphrase_steps;
        auto [i, j] = paraphrases_->SamplePair(rng);
        const size_t cluster = paraphrases_->cluster_of(i);
        auto draw = [&]() -> SparseVector {
          return para_vecs_[paraphrases_->SampleOutsideCluster(cluster, rng)];
        };
        WarpResult warp =
            WarpFindViolator(para_vecs_[i], para_vecs_[j], model_,
                             LossKind::kParaphrase, max_trials, draw);
        if (warp.negative.has_value()) {
          GradStep(para_vecs_[i], para_vecs_[j], *warp.negative, model_,
                   LossKind::kParaphrase);
          ++counters.violations;
        } else {
          ++counters.exhausted_searches;
        }
        continue;
      }

      ++counters.qa_steps;
      ++counters.per_source[pick.source];
      const PreppedSource& src = sources_[pick.source];
      std::uniform_int_distribution<size_t> example_pick(
          0, src.examples.size() - 1);
      const PreppedExample& ex = src.examples[example_pick(rng)];
      size_t gold_slot = 0;
      if (ex.fact_indices.size() > 1) {
        std::uniform_int_distribution<size_t> gold_pick(
            0, ex.fact_indices.size() - 1);
        gold_slot = gold_pick(rng);
      }
      const SparseVector& pos = ex.gold_vecs[gold_slot];
      const uint32_t gold_index = ex.fact_indices[gold_slot];

      const bool use_candidates = config_.policy == NegativePolicy::kCandidates &&
                                  !src.synthetic && !ex.negative_pool.empty();
      auto draw = [&]() -> SparseVector {
        if (use_candidates) {
          std::uniform_int_distribution<size_t> pool_pick(
              0, ex.negative_pool.size() - 1);
          uint32_t idx = ex.negative_pool[pool_pick(rng)];
          return candidate_vecs_[candidate_slot_.at(idx)];
        }
        NegativeDraw d =
            SampleNegativeDefault(store_.fact(gold_index), store_, multi, rng);
        return EncodeFact(d.fact, tables_.symbols, store_);
      };
      WarpResult warp = WarpFindViolator(ex.question, pos, model_,
                                         LossKind::kQa, max_trials, draw);
      if (warp.negative.has_value()) {
        GradStep(ex.question, pos, *warp.negative, model_, LossKind::kQa);
        ++counters.violations;
      } else {
        ++counters.exhausted_searches;
      }
    }
  }

  const GroupedFactStore& store_;
  const EncoderTables& tables_;
  const AliasIndex& aliases_;
  const TrainConfig& config_;
  const ParaphraseSet* paraphrases_;
  WordLists lists_;  // copy: the default lists are made on the spot
  TaskSchedule schedule_;
  EmbeddingModel model_;

  std::vector<PreppedSource> sources_;
  std::vector<SparseVector> candidate_vecs_;
  std::unordered_map<uint32_t, size_t> candidate_slot_;
  std::vector<SparseVector> para_vecs_;
  std::vector<ValidationEntry> validation_;
  uint64_t eval_every_ = 0;
  TaskCounters counters_;
};

}  // namespace

TrainState Train(const std::vector<TrainDataset>& sources,
                 const ParaphraseSet* paraphrases,
                 const GroupedFactStore& store, const EncoderTables& tables,
                 const AliasIndex& aliases,
                 std::span<const QAExample> validation,
                 const TrainConfig& config) {
  if (sources.empty() &&
      (paraphrases == nullptr || paraphrases->num_clusters() == 0)) {
    throw std::invalid_argument("nothing to train on");
  }
  TrainRun run(sources, paraphrases, store, tables, aliases, validation,
               config);
  return run.Run();
}

}  // namespace memnet
