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
// Deliberately naive reference implementations the tests compare the real
// code against. Everything here favors obviousness over speed and shares no
// code with the library beyond types.

#ifndef MEMNET_TESTS_SUPPORT_ORACLES_H_
#define MEMNET_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "memnet/candidate_gen.h"
#include "memnet/kb_store.h"
#include "memnet/model.h"
#include "memnet/sparse_vector.h"
#include "memnet/supervision.h"
#include "memnet/trainer.h"
#include "support/test_support.h"

namespace memnet::testing {

// Mediator collapse over raw string triples. Pass-through facts keep input
// order; condensed facts follow in (s, r, o) lexicographic order. Writes
// the number of mediators that appear in some fact but lack an incoming or
// an outgoing edge.
std::vector<Triple> OracleCollapse(
    std::span<const Triple> input,
    const std::function<bool(std::string_view)>& is_mediator,
    size_t* dangling = nullptr);

struct OracleGrouped {
  // (subject, relationship, sorted object set) in first-seen key order.
  std::vector<std::tuple<std::string, std::string, std::set<std::string>>>
      facts;
  std::map<std::string, size_t> degree;  // over entities only
};

OracleGrouped OracleGroup(std::span<const Triple> atomic);

// Brute-force n-gram enumeration with the interrogative-span and
// stopword-1-gram filters, ordered by decreasing length then left to right.
std::vector<QuestionNgram> OracleNgrams(std::string_view question,
                                        const WordLists& lists);

// Literal "kept match" filtering: process by decreasing span length; a
// match dies when an already kept strictly longer superspan exists, unless
// that superspan only adds a leading "in", "of", "for" or "the".
std::vector<NgramMatch> OracleMatchAliases(
    std::span<const QuestionNgram> ngrams, const AliasIndex& aliases,
    std::span<const std::string> question_tokens);

std::vector<EntityId> OracleSelectEntities(std::span<const NgramMatch> matches,
                                           const GroupedFactStore& store);

std::vector<uint32_t> OracleCandidateFacts(std::span<const EntityId> entities,
                                           const GroupedFactStore& store);

// Exhaustive distant-supervision labeling over a candidate set: per fact
// the number of distinct normalized answers matched by an object alias,
// then max match count, then minimal object count, all ties kept.
std::vector<uint32_t> OracleLabelDistant(
    const std::vector<std::string>& answers,
    std::span<const uint32_t> candidate_facts, const GroupedFactStore& store,
    const AliasIndex& aliases);

// Dense double-precision copy of a model for finite-difference checks.
// Perturbations on this copy are exact, which float weights cannot offer.
struct DenseModel {
  uint32_t dim = 0;
  std::vector<std::vector<double>> vocab;    // [column][row]
  std::vector<std::vector<double>> symbols;  // [column][row]

  static DenseModel From(const EmbeddingModel& model);

  std::vector<double> Embed(Matrix m, const SparseVector& v) const;
  // Raw cosine (no clamping), zero-vector convention 0.
  double Cosine(const std::vector<double>& a,
                const std::vector<double>& b) const;
  double Loss(const SparseVector& q, const SparseVector& pos,
              const SparseVector& neg, LossKind kind, double margin) const;
};

// Central finite difference of the margin loss with respect to one matrix
// entry, step h, computed on an exact double copy.
double FiniteDifference(DenseModel model, Matrix m, uint32_t column,
                        uint32_t row, const SparseVector& q,
                        const SparseVector& pos, const SparseVector& neg,
                        LossKind kind, double margin, double h);

// Set F1 with the zero conventions of the evaluation protocol.
double OracleSetF1(const std::set<std::string>& predicted,
                   const std::set<std::string>& gold);

}  // namespace memnet::testing

#endif  // MEMNET_TESTS_SUPPORT_ORACLES_H_
