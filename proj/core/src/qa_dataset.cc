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

#include "memnet/qa_dataset.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "memnet/text.h"

namespace memnet {

QaFile LoadQaExamples(const std::string& path, const GroupedFactStore& store) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  QaFile file;
  StringMap<size_t> by_question;
  const SymbolInterner& interner = store.interner();

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsCommentOrBlank(line)) continue;
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty() || fields[3].empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected question<TAB>subject<TAB>"
                               "relationship<TAB>objects");
    }

    std::optional<uint32_t> subject = interner.Find(fields[1]);
    std::optional<uint32_t> rel = interner.Find(fields[2]);
    std::optional<uint32_t> fact_index;
    if (subject.has_value() && rel.has_value()) {
      fact_index = store.Find(EntityId{*subject}, RelationId{*rel});
    }
    if (!fact_index.has_value()) {
      ++file.skipped;
      continue;
    }

    auto it = by_question.find(fields[0]);
    if (it == by_question.end()) {
      by_question.emplace(std::string(fields[0]), file.examples.size());
      file.examples.push_back(
          QAExample{std::string(fields[0]), {*fact_index}});
    } else {
      std::vector<uint32_t>& indices = file.examples[it->second].fact_indices;
      if (std::find(indices.begin(), indices.end(), *fact_index) ==
          indices.end()) {
        indices.push_back(*fact_index);
      }
    }
  }
  return file;
}

void SaveQaExamples(std::span<const QAExample> examples,
                    const GroupedFactStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  for (const QAExample& ex : examples) {
    for (uint32_t idx : ex.fact_indices) {
      const GroupedFact& fact = store.fact(idx);
      out << ex.question << '\t' << store.SymbolOf(fact.subject) << '\t'
          << store.SymbolOf(fact.relationship) << '\t';
      for (size_t i = 0; i < fact.objects.size(); ++i) {
        if (i > 0) out << ',';
        out << store.SymbolOf(fact.objects[i]);
      }
      out << '\n';
    }
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace memnet
