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

#include "memnet/eval_answer.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "memnet/text.h"

namespace memnet {

size_t BestRankedIndex(std::span<const ScoredFact> scored,
                       const GroupedFactStore& store) {
  if (scored.empty()) {
    throw std::invalid_argument("no scored facts");
  }
  size_t best = 0;
  for (size_t i = 1; i < scored.size(); ++i) {
    const GroupedFact& a = store.fact(scored[i].fact_index);
    const GroupedFact& b = store.fact(scored[best].fact_index);
    if (scored[i].score > scored[best].score) {
      best = i;
    } else if (scored[i].score == scored[best].score) {
      auto ka = std::tie(store.SymbolOf(a.subject), store.SymbolOf(a.relationship));
      auto kb = std::tie(store.SymbolOf(b.subject), store.SymbolOf(b.relationship));
      if (ka < kb) best = i;
    }
  }
  return best;
}

Prediction Answer(std::string_view question, const GroupedFactStore& store,
                  const EncoderTables& tables, const AliasIndex& aliases,
                  const AnswerOptions& options) {
  if (options.models.empty()) {
    throw std::invalid_argument("answering needs at least one model");
  }
  const WordLists& lists =
      options.lists != nullptr ? *options.lists : WordLists::Defaults();

  CandidateSet cands = GenerateCandidates(question, store, aliases, lists);
  Prediction pred;
  if (cands.fact_indices.empty()) {
    pred.no_candidates = true;
    return pred;
  }

  SparseVector q = EncodeQuestion(question, tables.vocab, aliases);
  pred.ranked.reserve(cands.fact_indices.size());
  for (uint32_t idx : cands.fact_indices) {
    SparseVector f = EncodeFact(store.fact(idx), tables.symbols, store);
    double score = EnsembleScoreQa(options.models, q, f);
    if (options.subgraph_model != nullptr) {
      SparseVector sub =
          EncodeFactSubgraph(store.fact(idx), tables.symbols, store);
      score += options.subgraph_model->ScoreQa(q, sub);
    }
    pred.ranked.push_back(ScoredFact{idx, score});
  }

  std::sort(pred.ranked.begin(), pred.ranked.end(),
            [&](const ScoredFact& a, const ScoredFact& b) {
              if (a.score != b.score) return a.score > b.score;
              const GroupedFact& fa = store.fact(a.fact_index);
              const GroupedFact& fb = store.fact(b.fact_index);
              return std::tie(store.SymbolOf(fa.subject),
                              store.SymbolOf(fa.relationship)) <
                     std::tie(store.SymbolOf(fb.subject),
                              store.SymbolOf(fb.relationship));
            });
  const GroupedFact& top = store.fact(pred.ranked.front().fact_index);
  pred.answer_objects = top.objects;
  return pred;
}

namespace {

std::string AnswerString(EntityId entity, const GroupedFactStore& store,
                         const AliasIndex& aliases) {
  std::optional<std::string_view> name = aliases.CanonicalName(entity);
  std::string raw =
      name.has_value() ? std::string(*name) : store.SymbolOf(entity);
  return NormalizeText(raw);
}

}  // namespace

EvalReport EvalF1(std::span<const Prediction> predictions,
                  std::span<const std::vector<std::string>> gold_answers,
                  const GroupedFactStore& store, const AliasIndex& aliases) {
  if (predictions.size() != gold_answers.size()) {
    throw std::invalid_argument("predictions and gold answers differ in size");
  }
  EvalReport report;
  report.metric = "f1";
  double sum = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    StringSet gold;
    for (const std::string& a : gold_answers[i]) {
      std::string norm = NormalizeText(a);
      if (!norm.empty()) gold.insert(std::move(norm));
    }
    StringSet predicted;
    for (EntityId o : predictions[i].answer_objects) {
      std::string s = AnswerString(o, store, aliases);
      if (!s.empty()) predicted.insert(std::move(s));
    }

    double f1 = 0.0;
    if (!predicted.empty() && !gold.empty()) {
      size_t hit = 0;
      for (const std::string& p : predicted) {
        if (gold.count(p) > 0) ++hit;
      }
      if (hit > 0) {
        double precision = static_cast<double>(hit) / predicted.size();
        double recall = static_cast<double>(hit) / gold.size();
        f1 = 2.0 * precision * recall / (precision + recall);
      }
    }
    report.per_question.push_back(f1);
    sum += f1;
  }
  report.evaluated = predictions.size();
  report.value = predictions.empty() ? 0.0 : sum / predictions.size();
  return report;
}

EvalReport EvalPathAccuracy(std::span<const Prediction> predictions,
                            std::span<const QAExample> gold,
                            const GroupedFactStore& store) {
  if (predictions.size() != gold.size()) {
    throw std::invalid_argument("predictions and gold examples differ in size");
  }
  EvalReport report;
  report.metric = "path_accuracy";
  size_t correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    bool ok = false;
    if (!predictions[i].no_candidates && !predictions[i].ranked.empty()) {
      const GroupedFact& top =
          store.fact(predictions[i].ranked.front().fact_index);
      for (uint32_t gold_idx : gold[i].fact_indices) {
        const GroupedFact& g = store.fact(gold_idx);
        if (g.subject == top.subject && g.relationship == top.relationship) {
          ok = true;
          break;
        }
      }
    }
    report.per_question.push_back(ok ? 1.0 : 0.0);
    if (ok) ++correct;
  }
  report.evaluated = predictions.size();
  report.value = predictions.empty()
                     ? 0.0
                     : static_cast<double>(correct) / predictions.size();
  return report;
}

std::vector<RerankQuestion> LoadRerankFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::vector<RerankQuestion> questions;
  StringMap<size_t> by_question;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 5 || fields[0].empty()) {
      throw std::runtime_error(
          path + ":" + std::to_string(line_no) +
          ": expected question<TAB>subject<TAB>relation<TAB>object<TAB>label");
    }
    bool label;
    if (fields[4] == "1") {
      label = true;
    } else if (fields[4] == "0") {
      label = false;
    } else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": label must be 0 or 1");
    }
    auto it = by_question.find(fields[0]);
    if (it == by_question.end()) {
      by_question.emplace(std::string(fields[0]), questions.size());
      questions.push_back(RerankQuestion{std::string(fields[0]), {}});
      it = by_question.find(fields[0]);
    }
    questions[it->second].candidates.push_back(RerankCandidate{
        ExternalFactInput{std::string(fields[1]), std::string(fields[2]),
                          std::string(fields[3])},
        label});
  }
  return questions;
}

EvalReport EvalRerank(std::span<const RerankQuestion> questions,
                      const EmbeddingModel& model,
                      const GroupedFactStore& store, const AliasIndex& aliases,
                      const EncoderTables& tables) {
  EvalReport report;
  report.metric = "rerank_accuracy";
  size_t correct = 0;
  for (const RerankQuestion& rq : questions) {
    if (rq.candidates.empty()) {
      ++report.skipped;
      continue;
    }
    SparseVector q = EncodeQuestion(rq.question, tables.vocab, aliases);

    size_t best = 0;
    double best_score = 0.0;
    for (size_t i = 0; i < rq.candidates.size(); ++i) {
      const ExternalFactInput& fact = rq.candidates[i].fact;
      std::optional<EntityId> subject_link =
          LinkEntity(fact.subject, aliases, store);
      std::optional<EntityId> object_link =
          LinkEntity(fact.object, aliases, store);
      SparseVector h =
          EncodeExternalFact(fact.subject, subject_link, fact.relation,
                             fact.object, object_link, tables.symbols,
                             tables.vocab);
      double score = model.ScoreExternal(q, h);
      if (i == 0 || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    bool ok = rq.candidates[best].correct;
    report.per_question.push_back(ok ? 1.0 : 0.0);
    if (ok) ++correct;
    ++report.evaluated;
  }
  report.value = report.evaluated == 0
                     ? 0.0
                     : static_cast<double>(correct) / report.evaluated;
  return report;
}

double RerankRandomBaseline(std::span<const RerankQuestion> questions) {
  double sum = 0.0;
  size_t counted = 0;
  for (const RerankQuestion& rq : questions) {
    if (rq.candidates.empty()) continue;
    sum += 1.0 / static_cast<double>(rq.candidates.size());
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / counted;
}

}  // namespace memnet
