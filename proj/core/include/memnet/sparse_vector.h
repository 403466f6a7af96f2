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

#ifndef MEMNET_CORE_SPARSE_VECTOR_H_
#define MEMNET_CORE_SPARSE_VECTOR_H_

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace memnet {

// Sparse vector over a fixed-dimension index space. Entries are sorted by
// strictly increasing index and never hold weight zero.
struct SparseVector {
  struct Entry {
    uint32_t index;
    double weight;
    bool operator==(const Entry&) const = default;
  };

  uint32_t dim = 0;
  std::vector<Entry> entries;

  bool operator==(const SparseVector&) const = default;

  double Sum() const {
    double s = 0.0;
    for (const Entry& e : entries) s += e.weight;
    return s;
  }
};

// Accumulates (index, weight) pairs; duplicate indexes sum. Build() sorts,
// merges, and drops exact zeros.
class SparseVectorBuilder {
 public:
  explicit SparseVectorBuilder(uint32_t dim) : dim_(dim) {}

  void Add(uint32_t index, double weight) {
    entries_.push_back(SparseVector::Entry{index, weight});
  }

  SparseVector Build() && {
    std::sort(entries_.begin(), entries_.end(),
              [](const SparseVector::Entry& a, const SparseVector::Entry& b) {
                return a.index < b.index;
              });
    std::vector<SparseVector::Entry> merged;
    merged.reserve(entries_.size());
    for (const SparseVector::Entry& e : entries_) {
      if (!merged.empty() && merged.back().index == e.index) {
        merged.back().weight += e.weight;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged,
                  [](const SparseVector::Entry& e) { return e.weight == 0.0; });
    return SparseVector{dim_, std::move(merged)};
  }

 private:
  uint32_t dim_;
  std::vector<SparseVector::Entry> entries_;
};

}  // namespace memnet

#endif  // MEMNET_CORE_SPARSE_VECTOR_H_
