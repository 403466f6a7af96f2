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

#include "memnet/supervision.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "memnet/text.h"

namespace memnet {
namespace {

constexpr std::string_view kTemplates[] = {
    "what is the {relation} of {subject} ?",
    "which {relation} does {subject} have ?",
    "tell me the {relation} of {subject}",
};

std::string FillTemplate(std::string_view tmpl, std::string_view relation,
                         std::string_view subject) {
  std::string out(tmpl);
  auto replace = [&out](std::string_view needle, std::string_view value) {
    size_t pos = out.find(needle);
    if (pos != std::string::npos) {
      out.replace(pos, needle.size(), value);
    }
  };
  replace("{relation}", relation);
  replace("{subject}", subject);
  return out;
}

}  // namespace

std::vector<AnswerLabeledQuestion> LoadAnswerLabeled(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::vector<AnswerLabeledQuestion> items;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected question<TAB>answers");
    }
    AnswerLabeledQuestion item;
    item.question = std::string(fields[0]);
    for (std::string_view a : SplitChar(fields[1], '|')) {
      if (!a.empty()) item.answers.emplace_back(a);
    }
    if (item.answers.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": no answers");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<uint32_t> LabelDistant(const AnswerLabeledQuestion& item,
                                   const GroupedFactStore& store,
                                   const AliasIndex& aliases,
                                   const WordLists& lists) {
  CandidateSet cands = GenerateCandidates(item.question, store, aliases, lists);
  if (cands.fact_indices.empty()) return {};

  // Distinct answers by normalized form; each may be matched by an alias of
  // some object of a candidate.
  std::vector<std::string> answers;
  for (const std::string& a : item.answers) {
    std::string norm = NormalizeText(a);
    if (norm.empty()) continue;
    if (std::find(answers.begin(), answers.end(), norm) == answers.end()) {
      answers.push_back(std::move(norm));
    }
  }
  if (answers.empty()) return {};

  size_t best_count = 0;
  std::vector<std::pair<uint32_t, size_t>> counted;  // (fact index, matches)
  for (uint32_t idx : cands.fact_indices) {
    const GroupedFact& fact = store.fact(idx);
    size_t count = 0;
    for (const std::string& answer : answers) {
      std::span<const EntityId> named = aliases.LookupNormalized(answer);
      bool matched = false;
      for (EntityId o : fact.objects) {
        if (std::find(named.begin(), named.end(), o) != named.end()) {
          matched = true;
          break;
        }
      }
      if (matched) ++count;
    }
    if (count > 0) counted.emplace_back(idx, count);
    best_count = std::max(best_count, count);
  }
  if (best_count == 0) return {};

  size_t min_objects = SIZE_MAX;
  for (const auto& [idx, count] : counted) {
    if (count == best_count) {
      min_objects = std::min(min_objects, store.fact(idx).objects.size());
    }
  }
  std::vector<uint32_t> winners;
  for (const auto& [idx, count] : counted) {
    if (count == best_count && store.fact(idx).objects.size() == min_objects) {
      winners.push_back(idx);
    }
  }
  return winners;
}

std::vector<QAExample> LabelDistantAll(
    std::span<const AnswerLabeledQuestion> items, const GroupedFactStore& store,
    const AliasIndex& aliases, const WordLists& lists, DistantStats* stats) {
  DistantStats local;
  std::vector<QAExample> examples;
  for (const AnswerLabeledQuestion& item : items) {
    std::vector<uint32_t> facts = LabelDistant(item, store, aliases, lists);
    if (facts.empty()) {
      ++local.discarded;
      continue;
    }
    ++local.labeled;
    examples.push_back(QAExample{item.question, std::move(facts)});
  }
  if (stats != nullptr) *stats = local;
  return examples;
}

std::span<const std::string_view> SyntheticTemplates() { return kTemplates; }

std::string RelationWords(std::string_view relation_symbol) {
  size_t dot = relation_symbol.rfind('.');
  std::string_view segment = dot == std::string_view::npos
                                 ? relation_symbol
                                 : relation_symbol.substr(dot + 1);
  std::string words(segment);
  std::replace(words.begin(), words.end(), '_', ' ');
  return words;
}

std::vector<QAExample> GenerateSynthetic(const GroupedFactStore& store,
                                         const AliasIndex& aliases,
                                         const SyntheticConfig& config,
                                         SyntheticStats* stats) {
  SyntheticStats local;
  std::mt19937_64 rng(config.seed);

  // Eligible facts: small enough object set, subject has at least one alias.
  std::vector<uint32_t> eligible;
  for (uint32_t idx = 0; idx < store.size(); ++idx) {
    const GroupedFact& fact = store.fact(idx);
    if (fact.objects.size() > config.max_objects) {
      ++local.skipped_object_count;
      continue;
    }
    if (aliases.AliasesOf(fact.subject).empty()) {
      ++local.skipped_no_alias;
      continue;
    }
    eligible.push_back(idx);
  }

  auto emit = [&](uint32_t idx) {
    const GroupedFact& fact = store.fact(idx);
    std::span<const std::string> subject_aliases =
        aliases.AliasesOf(fact.subject);
    std::uniform_int_distribution<size_t> alias_pick(
        0, subject_aliases.size() - 1);
    std::uniform_int_distribution<size_t> template_pick(
        0, std::size(kTemplates) - 1);
    const std::string& alias = subject_aliases[alias_pick(rng)];
    std::string relation = RelationWords(store.SymbolOf(fact.relationship));
    std::string question =
        FillTemplate(kTemplates[template_pick(rng)], relation, alias);
    ++local.emitted;
    return QAExample{std::move(question), {idx}};
  };

  std::vector<QAExample> out;
  if (config.weighted_sample_count == 0) {
    out.reserve(eligible.size());
    for (uint32_t idx : eligible) {
      out.push_back(emit(idx));
    }
  } else if (!eligible.empty()) {
    std::unordered_map<uint32_t, size_t> rel_freq;
    for (const GroupedFact& fact : store.facts()) {
      ++rel_freq[fact.relationship.value];
    }
    std::vector<double> weights;
    weights.reserve(eligible.size());
    for (uint32_t idx : eligible) {
      weights.push_back(1.0 /
                        static_cast<double>(
                            rel_freq[store.fact(idx).relationship.value]));
    }
    std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
    out.reserve(config.weighted_sample_count);
    for (size_t i = 0; i < config.weighted_sample_count; ++i) {
      out.push_back(emit(eligible[pick(rng)]));
    }
  }

  if (stats != nullptr) *stats = local;
  return out;
}

ParaphraseSet::ParaphraseSet(std::vector<ParaphraseCluster> clusters)
    : clusters_(std::move(clusters)) {
  for (const ParaphraseCluster& c : clusters_) {
    if (c.questions.size() < 2) {
      throw std::invalid_argument("paraphrase cluster needs two questions");
    }
  }
  for (size_t c = 0; c < clusters_.size(); ++c) {
    for (const std::string& q : clusters_[c].questions) {
      flat_.emplace_back(q, c);
    }
  }
}

std::pair<size_t, size_t> ParaphraseSet::SamplePair(
    std::mt19937_64& rng) const {
  if (clusters_.empty()) {
    throw std::logic_error("no paraphrase clusters");
  }
  std::uniform_int_distribution<size_t> cluster_pick(0, clusters_.size() - 1);
  size_t c = cluster_pick(rng);

  // Flat indexes are laid out cluster by cluster.
  size_t start = 0;
  for (size_t i = 0; i < c; ++i) start += clusters_[i].questions.size();
  size_t size = clusters_[c].questions.size();

  std::uniform_int_distribution<size_t> first_pick(0, size - 1);
  size_t i = first_pick(rng);
  std::uniform_int_distribution<size_t> second_pick(0, size - 2);
  size_t j = second_pick(rng);
  if (j >= i) ++j;
  return {start + i, start + j};
}

size_t ParaphraseSet::SampleOutsideCluster(size_t cluster_index,
                                           std::mt19937_64& rng) const {
  size_t start = 0;
  for (size_t i = 0; i < cluster_index; ++i) {
    start += clusters_[i].questions.size();
  }
  size_t size = clusters_[cluster_index].questions.size();
  size_t outside = flat_.size() - size;
  if (outside == 0) {
    throw std::logic_error("no questions outside the cluster");
  }
  std::uniform_int_distribution<size_t> pick(0, outside - 1);
  size_t k = pick(rng);
  return k < start ? k : k + size;
}

ParaphraseSet LoadParaphrases(const std::string& path,
                              ParaphraseFileStats* stats) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  ParaphraseFileStats local;
  std::vector<ParaphraseCluster> clusters;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    ParaphraseCluster cluster;
    for (std::string_view q : SplitTabs(line)) {
      if (!q.empty()) cluster.questions.emplace_back(q);
    }
    if (cluster.questions.size() < 2) {
      ++local.dropped_small;
      continue;
    }
    ++local.clusters_kept;
    clusters.push_back(std::move(cluster));
  }
  if (stats != nullptr) *stats = local;
  return ParaphraseSet(std::move(clusters));
}

}  // namespace memnet
