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

#include "memnet/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace memnet {
namespace {

constexpr char kMagic[8] = {'M', 'E', 'M', 'N', 'E', 'T', 'M', '\0'};
constexpr uint32_t kFormatVersion = 1;

void CheckDim(uint32_t vector_dim, uint32_t expected, const char* what) {
  if (vector_dim != expected) {
    throw std::invalid_argument(
        std::string("sparse vector dimension mismatch for ") + what +
        ": got " + std::to_string(vector_dim) + ", expected " +
        std::to_string(expected));
  }
}

// Serialization helpers that track the byte offset for error reporting.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void Put(const T& value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }

  void PutFloats(std::span<const float> values) {
    out_.write(reinterpret_cast<const char*>(values.data()),
               static_cast<std::streamsize>(values.size() * sizeof(float)));
  }

  bool ok() const { return static_cast<bool>(out_); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T Get(const char* what) {
    T value;
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in_) Fail(what);
    offset_ += sizeof(T);
    return value;
  }

  void GetFloats(std::span<float> values, const char* what) {
    in_.read(reinterpret_cast<char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(float)));
    if (!in_) Fail(what);
    offset_ += values.size() * sizeof(float);
  }

  [[noreturn]] void Fail(const char* what) const {
    throw std::runtime_error("truncated or corrupt model file at offset " +
                             std::to_string(offset_) + " while reading " +
                             what);
  }

  size_t offset() const { return offset_; }
  std::istream& stream() { return in_; }

 private:
  std::istream& in_;
  size_t offset_ = 0;
};

}  // namespace

EmbeddingModel::EmbeddingModel(uint32_t num_vocab, uint32_t num_symbols,
                               Hyperparams hyper)
    : hyper_(hyper), num_vocab_(num_vocab), num_symbols_(num_symbols) {
  if (hyper_.dim == 0) {
    throw std::invalid_argument("embedding dimension must be positive");
  }
  const size_t d = hyper_.dim;
  vocab_.resize(d * num_vocab_);
  symbols_.resize(d * num_symbols_);
  adagrad_vocab_.assign(d * num_vocab_, 0.0f);
  adagrad_symbols_.assign(d * num_symbols_, 0.0f);

  std::mt19937_64 rng(hyper_.seed);
  const float bound = 1.0f / std::sqrt(static_cast<float>(d));
  std::uniform_real_distribution<float> dist(-bound, bound);
  for (float& w : vocab_) w = dist(rng);
  for (float& w : symbols_) w = dist(rng);
  ProjectAllColumns();
}

float* EmbeddingModel::column(Matrix m, uint32_t col) {
  return matrix(m).data() + static_cast<size_t>(col) * hyper_.dim;
}

const float* EmbeddingModel::column(Matrix m, uint32_t col) const {
  return matrix(m).data() + static_cast<size_t>(col) * hyper_.dim;
}

float* EmbeddingModel::adagrad_column(Matrix m, uint32_t col) {
  std::vector<float>& acc =
      m == Matrix::kVocab ? adagrad_vocab_ : adagrad_symbols_;
  return acc.data() + static_cast<size_t>(col) * hyper_.dim;
}

void EmbeddingModel::EmbedInto(Matrix m, const SparseVector& v,
                               std::span<double> out) const {
  CheckDim(v.dim, num_columns(m),
           m == Matrix::kVocab ? "vocabulary embedding" : "symbol embedding");
  std::fill(out.begin(), out.end(), 0.0);
  const uint32_t d = hyper_.dim;
  for (const SparseVector::Entry& e : v.entries) {
    const float* col = column(m, e.index);
    for (uint32_t k = 0; k < d; ++k) {
      out[k] += e.weight * static_cast<double>(col[k]);
    }
  }
}

void EmbeddingModel::EmbedConcatInto(const SparseVector& v,
                                     std::span<double> out) const {
  CheckDim(v.dim, num_vocab_ + num_symbols_, "concatenated embedding");
  std::fill(out.begin(), out.end(), 0.0);
  const uint32_t d = hyper_.dim;
  for (const SparseVector::Entry& e : v.entries) {
    const float* col = e.index < num_vocab_
                           ? column(Matrix::kVocab, e.index)
                           : column(Matrix::kSymbols, e.index - num_vocab_);
    for (uint32_t k = 0; k < d; ++k) {
      out[k] += e.weight * static_cast<double>(col[k]);
    }
  }
}

std::vector<double> EmbeddingModel::Embed(Matrix m,
                                          const SparseVector& v) const {
  std::vector<double> out(hyper_.dim);
  EmbedInto(m, v, out);
  return out;
}

std::vector<double> EmbeddingModel::EmbedConcat(const SparseVector& v) const {
  std::vector<double> out(hyper_.dim);
  EmbedConcatInto(v, out);
  return out;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(cos, -1.0, 1.0);
}

double EmbeddingModel::ScoreQa(const SparseVector& question,
                               const SparseVector& fact) const {
  std::vector<double> q = Embed(Matrix::kVocab, question);
  std::vector<double> f = Embed(Matrix::kSymbols, fact);
  return CosineSimilarity(q, f);
}

double EmbeddingModel::ScoreExternal(const SparseVector& question,
                                     const SparseVector& external_fact) const {
  std::vector<double> q = Embed(Matrix::kVocab, question);
  std::vector<double> f = EmbedConcat(external_fact);
  return CosineSimilarity(q, f);
}

double EmbeddingModel::ScoreParaphrase(const SparseVector& q1,
                                       const SparseVector& q2) const {
  std::vector<double> a = Embed(Matrix::kVocab, q1);
  std::vector<double> b = Embed(Matrix::kVocab, q2);
  return CosineSimilarity(a, b);
}

double EmbeddingModel::ColumnNorm(Matrix m, uint32_t col) const {
  const float* c = column(m, col);
  double sq = 0.0;
  for (uint32_t k = 0; k < hyper_.dim; ++k) {
    sq += static_cast<double>(c[k]) * static_cast<double>(c[k]);
  }
  return std::sqrt(sq);
}

void EmbeddingModel::ProjectColumn(Matrix m, uint32_t col) {
  double norm = ColumnNorm(m, col);
  if (norm <= 1.0) return;
  float* c = column(m, col);
  const float scale = static_cast<float>(1.0 / norm);
  for (uint32_t k = 0; k < hyper_.dim; ++k) {
    c[k] *= scale;
  }
}

void EmbeddingModel::ProjectAllColumns() {
  for (uint32_t c = 0; c < num_vocab_; ++c) ProjectColumn(Matrix::kVocab, c);
  for (uint32_t c = 0; c < num_symbols_; ++c) {
    ProjectColumn(Matrix::kSymbols, c);
  }
}

void EmbeddingModel::Save(std::ostream& out) const {
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.Put(kFormatVersion);
  w.Put(hyper_.dim);
  w.Put(num_vocab_);
  w.Put(num_symbols_);
  w.Put(hyper_.learning_rate);
  w.Put(hyper_.margin);
  w.Put(hyper_.paraphrase_prob);
  w.Put(hyper_.multi_corrupt_prob);
  w.Put(hyper_.warp_max_trials);
  w.Put(hyper_.seed);
  w.PutFloats(vocab_);
  w.PutFloats(symbols_);
  w.PutFloats(adagrad_vocab_);
  w.PutFloats(adagrad_symbols_);
  if (!w.ok()) {
    throw std::runtime_error("model write failed");
  }
}

void EmbeddingModel::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  Save(out);
  if (!out) {
    throw std::runtime_error("model write failed: " + path);
  }
}

EmbeddingModel EmbeddingModel::Load(std::istream& in) {
  Reader r(in);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a model file (bad magic)");
  }
  uint32_t version = r.Get<uint32_t>("version");
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported model format version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kFormatVersion) + ")");
  }

  EmbeddingModel model;
  model.hyper_.dim = r.Get<uint32_t>("dim");
  model.num_vocab_ = r.Get<uint32_t>("num_vocab");
  model.num_symbols_ = r.Get<uint32_t>("num_symbols");
  if (model.hyper_.dim == 0) {
    throw std::runtime_error("model file has zero embedding dimension");
  }
  model.hyper_.learning_rate = r.Get<double>("learning_rate");
  model.hyper_.margin = r.Get<double>("margin");
  model.hyper_.paraphrase_prob = r.Get<double>("paraphrase_prob");
  model.hyper_.multi_corrupt_prob = r.Get<double>("multi_corrupt_prob");
  model.hyper_.warp_max_trials = r.Get<uint32_t>("warp_max_trials");
  model.hyper_.seed = r.Get<uint64_t>("seed");

  const size_t d = model.hyper_.dim;
  model.vocab_.resize(d * model.num_vocab_);
  model.symbols_.resize(d * model.num_symbols_);
  model.adagrad_vocab_.resize(d * model.num_vocab_);
  model.adagrad_symbols_.resize(d * model.num_symbols_);
  r.GetFloats(model.vocab_, "vocabulary matrix");
  r.GetFloats(model.symbols_, "symbol matrix");
  r.GetFloats(model.adagrad_vocab_, "vocabulary accumulators");
  r.GetFloats(model.adagrad_symbols_, "symbol accumulators");

  in.peek();
  if (!in.eof()) {
    throw std::runtime_error("trailing bytes after model payload at offset " +
                             std::to_string(r.offset() + sizeof(kMagic)));
  }
  in.clear();
  return model;
}

EmbeddingModel EmbeddingModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  try {
    return Load(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

double EnsembleScoreQa(std::span<const EmbeddingModel* const> models,
                       const SparseVector& question, const SparseVector& fact) {
  if (models.empty()) {
    throw std::invalid_argument("ensemble needs at least one model");
  }
  for (const EmbeddingModel* m : models) {
    if (!models.front()->SameShape(*m)) {
      throw std::invalid_argument("ensemble models have mismatched shapes");
    }
  }
  double sum = 0.0;
  for (const EmbeddingModel* m : models) {
    sum += m->ScoreQa(question, fact);
  }
  return sum;
}

}  // namespace memnet
