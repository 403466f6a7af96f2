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

#ifndef MEMNET_CORE_QA_DATASET_H_
#define MEMNET_CORE_QA_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "memnet/kb_store.h"

namespace memnet {

// A question labeled with its supporting grouped facts. Most questions have
// exactly one; distant supervision can tie several, and training samples
// uniformly among them.
struct QAExample {
  std::string question;
  std::vector<uint32_t> fact_indices;  // indexes into the grouped store
};

struct QaFile {
  std::vector<QAExample> examples;
  size_t skipped = 0;  // lines whose (subject, relationship) is not stored
};

// Reads "question<TAB>subject<TAB>relationship<TAB>object[,object...]"
// lines. Lines naming a fact absent from the store are skipped and counted.
// Lines sharing a question string merge into one example with several
// supporting facts.
QaFile LoadQaExamples(const std::string& path, const GroupedFactStore& store);

// Writes one line per (example, supporting fact) pair in the same format.
void SaveQaExamples(std::span<const QAExample> examples,
                    const GroupedFactStore& store, const std::string& path);

}  // namespace memnet

#endif  // MEMNET_CORE_QA_DATASET_H_
