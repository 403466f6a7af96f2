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

#ifndef MEMNET_CORE_SUPERVISION_H_
#define MEMNET_CORE_SUPERVISION_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "memnet/candidate_gen.h"
#include "memnet/kb_store.h"
#include "memnet/qa_dataset.h"

namespace memnet {

// A question paired with its accepted answer strings, the input to distant
// supervision.
struct AnswerLabeledQuestion {
  std::string question;
  std::vector<std::string> answers;
};

// Reads "question<TAB>answer[|answer...]" lines.
std::vector<AnswerLabeledQuestion> LoadAnswerLabeled(const std::string& path);

// Labels a question with supporting facts: generates candidate facts, then
// for each candidate counts the distinct answer strings matched by an alias
// of one of its objects (normalized comparison). Candidates matching the
// most answers win; among those, the smallest object set wins. Returns all
// tied winners as store indexes; empty means the question is unlabelable
// and should be discarded.
std::vector<uint32_t> LabelDistant(const AnswerLabeledQuestion& item,
                                   const GroupedFactStore& store,
                                   const AliasIndex& aliases,
                                   const WordLists& lists);

struct DistantStats {
  size_t labeled = 0;
  size_t discarded = 0;
};

// Labels a whole dataset, turning each labelable question into a QAExample
// with all tied facts attached.
std::vector<QAExample> LabelDistantAll(
    std::span<const AnswerLabeledQuestion> items, const GroupedFactStore& store,
    const AliasIndex& aliases, const WordLists& lists,
    DistantStats* stats = nullptr);

struct SyntheticConfig {
  // Facts with more objects than this are skipped.
  size_t max_objects = 10;
  uint64_t seed = 1;
  // 0 emits one question per eligible fact; a positive count switches to
  // weighted sampling with replacement, drawing facts with probability
  // proportional to 1 / frequency(relationship).
  size_t weighted_sample_count = 0;
};

struct SyntheticStats {
  size_t emitted = 0;
  size_t skipped_object_count = 0;
  size_t skipped_no_alias = 0;
};

// Emits one template question per eligible grouped fact (or a weighted
// sample, see SyntheticConfig). The question inserts a uniformly chosen
// subject alias and the relationship's final dot-separated segment with
// underscores turned into spaces. Facts whose subject has no alias are
// skipped and counted.
std::vector<QAExample> GenerateSynthetic(const GroupedFactStore& store,
                                         const AliasIndex& aliases,
                                         const SyntheticConfig& config,
                                         SyntheticStats* stats = nullptr);

// The question templates used by GenerateSynthetic, with {relation} and
// {subject} placeholders.
std::span<const std::string_view> SyntheticTemplates();

// Human-readable relationship words: final dot-separated segment of the
// symbol, underscores replaced by spaces.
std::string RelationWords(std::string_view relation_symbol);

struct ParaphraseCluster {
  std::vector<std::string> questions;  // at least two
};

// Paraphrase clusters plus a flat view for sampling negatives.
class ParaphraseSet {
 public:
  explicit ParaphraseSet(std::vector<ParaphraseCluster> clusters);

  size_t num_clusters() const { return clusters_.size(); }
  const ParaphraseCluster& cluster(size_t i) const { return clusters_[i]; }
  size_t total_questions() const { return flat_.size(); }
  const std::string& question(size_t flat_index) const {
    return flat_[flat_index].first;
  }
  size_t cluster_of(size_t flat_index) const { return flat_[flat_index].second; }

  // Two distinct members of one uniformly chosen cluster.
  std::pair<size_t, size_t> SamplePair(std::mt19937_64& rng) const;
  // A question outside the given cluster, uniform over all such questions.
  size_t SampleOutsideCluster(size_t cluster_index,
                              std::mt19937_64& rng) const;

 private:
  std::vector<ParaphraseCluster> clusters_;
  std::vector<std::pair<std::string, size_t>> flat_;  // (question, cluster)
};

struct ParaphraseFileStats {
  size_t clusters_kept = 0;
  size_t dropped_small = 0;  // lines with fewer than two questions
};

// Reads one cluster per line, questions separated by tabs. Clusters with
// fewer than two questions are dropped and counted.
ParaphraseSet LoadParaphrases(const std::string& path,
                              ParaphraseFileStats* stats = nullptr);

}  // namespace memnet

#endif  // MEMNET_CORE_SUPERVISION_H_
