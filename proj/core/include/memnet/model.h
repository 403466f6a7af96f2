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

#ifndef MEMNET_CORE_MODEL_H_
#define MEMNET_CORE_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "memnet/sparse_vector.h"

namespace memnet {

struct Hyperparams {
  uint32_t dim = 64;
  double learning_rate = 0.1;
  double margin = 0.1;            // ranking margin gamma
  double paraphrase_prob = 0.2;   // multitask schedule weight
  double multi_corrupt_prob = 0.3;
  uint32_t warp_max_trials = 50;
  uint64_t seed = 1;

  bool operator==(const Hyperparams&) const = default;
};

enum class Matrix : uint8_t { kVocab = 0, kSymbols = 1 };

// Two float32 embedding matrices in column major order: one over the
// vocabulary space, one over the symbol space. Each column is kept inside
// the L2 unit ball. Dot products accumulate in 64-bit.
//
// Scoring routes a sparse vector by its dimension: vocabulary-dim vectors
// embed through the vocabulary matrix, symbol-dim through the symbol
// matrix, and concatenated vectors (dim = vocab + symbols) split entrywise,
// which scores external facts without ever materializing a combined matrix.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  // Initializes entries uniformly in [-1/sqrt(dim), 1/sqrt(dim)] from the
  // hyperparameter seed, then runs one projection pass.
  EmbeddingModel(uint32_t num_vocab, uint32_t num_symbols, Hyperparams hyper);

  uint32_t dim() const { return hyper_.dim; }
  uint32_t num_vocab() const { return num_vocab_; }
  uint32_t num_symbols() const { return num_symbols_; }
  const Hyperparams& hyper() const { return hyper_; }
  Hyperparams& mutable_hyper() { return hyper_; }

  uint32_t num_columns(Matrix m) const {
    return m == Matrix::kVocab ? num_vocab_ : num_symbols_;
  }
  float* column(Matrix m, uint32_t col);
  const float* column(Matrix m, uint32_t col) const;
  float* adagrad_column(Matrix m, uint32_t col);

  // out += weighted sum of matrix columns selected by v. The vector's
  // dimension must equal the matrix column count.
  void EmbedInto(Matrix m, const SparseVector& v, std::span<double> out) const;
  // Concatenated routing: indexes below num_vocab() select vocabulary
  // columns, the rest symbol columns. v.dim must be num_vocab+num_symbols.
  void EmbedConcatInto(const SparseVector& v, std::span<double> out) const;

  std::vector<double> Embed(Matrix m, const SparseVector& v) const;
  std::vector<double> EmbedConcat(const SparseVector& v) const;

  // Cosine similarity of the embedded sides, clamped to [-1, 1]. A zero
  // embedding on either side scores 0.
  double ScoreQa(const SparseVector& question, const SparseVector& fact) const;
  double ScoreExternal(const SparseVector& question,
                       const SparseVector& external_fact) const;
  double ScoreParaphrase(const SparseVector& q1, const SparseVector& q2) const;

  // Rescales columns with L2 norm above 1 back to norm 1.
  void ProjectColumn(Matrix m, uint32_t col);
  void ProjectAllColumns();
  double ColumnNorm(Matrix m, uint32_t col) const;

  bool SameShape(const EmbeddingModel& other) const {
    return dim() == other.dim() && num_vocab_ == other.num_vocab_ &&
           num_symbols_ == other.num_symbols_;
  }

  // Versioned binary format, little endian float32 payload. Loading a file
  // with a different version or a truncated payload raises with the byte
  // offset. A round trip is bit exact.
  void Save(const std::string& path) const;
  void Save(std::ostream& out) const;
  static EmbeddingModel Load(const std::string& path);
  static EmbeddingModel Load(std::istream& in);

 private:
  std::vector<float>& matrix(Matrix m) {
    return m == Matrix::kVocab ? vocab_ : symbols_;
  }
  const std::vector<float>& matrix(Matrix m) const {
    return m == Matrix::kVocab ? vocab_ : symbols_;
  }

  Hyperparams hyper_;
  uint32_t num_vocab_ = 0;
  uint32_t num_symbols_ = 0;
  std::vector<float> vocab_;      // dim x num_vocab, column major
  std::vector<float> symbols_;    // dim x num_symbols, column major
  std::vector<float> adagrad_vocab_;
  std::vector<float> adagrad_symbols_;
};

// Sum of ScoreQa over the models. All models must share the same shape.
double EnsembleScoreQa(std::span<const EmbeddingModel* const> models,
                       const SparseVector& question, const SparseVector& fact);

// Cosine of two dense vectors with the zero-vector convention, 64-bit
// accumulation, clamped to [-1, 1].
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

}  // namespace memnet

#endif  // MEMNET_CORE_MODEL_H_
