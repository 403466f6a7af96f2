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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "memnet/model.h"
#include "support/oracles.h"
#include "support/test_support.h"

using namespace memnet;
using namespace memnet::testing;

namespace {

Hyperparams SmallHyper(uint32_t dim, uint64_t seed) {
  Hyperparams h;
  h.dim = dim;
  h.seed = seed;
  return h;
}

SparseVector MakeVector(uint32_t dim,
                        std::vector<std::pair<uint32_t, double>> entries) {
  SparseVectorBuilder b(dim);
  for (auto& [i, w] : entries) b.Add(i, w);
  return std::move(b).Build();
}

SparseVector RandomVector(uint32_t dim, int max_entries, std::mt19937_64& rng) {
  std::uniform_int_distribution<uint32_t> index_pick(0, dim - 1);
  std::uniform_real_distribution<double> weight_pick(-1.0, 1.0);
  std::uniform_int_distribution<int> count_pick(1, max_entries);
  SparseVectorBuilder b(dim);
  int count = count_pick(rng);
  for (int i = 0; i < count; ++i) b.Add(index_pick(rng), weight_pick(rng));
  return std::move(b).Build();
}

std::string FileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("Initialization is seeded, bounded and inside the unit ball") {
  EmbeddingModel model(/*num_vocab=*/20, /*num_symbols=*/15,
                       SmallHyper(8, 99));
  CHECK(model.dim() == 8);
  CHECK(model.num_vocab() == 20);
  CHECK(model.num_symbols() == 15);

  const double bound = 1.0 / std::sqrt(8.0) + 1e-12;
  for (uint32_t c = 0; c < 20; ++c) {
    const float* col = model.column(Matrix::kVocab, c);
    for (uint32_t r = 0; r < 8; ++r) CHECK(std::abs(col[r]) <= bound);
    CHECK(model.ColumnNorm(Matrix::kVocab, c) <= 1.0 + 1e-6);
  }

  // Same seed, same matrices; different seed, different matrices.
  EmbeddingModel same(20, 15, SmallHyper(8, 99));
  EmbeddingModel other(20, 15, SmallHyper(8, 100));
  bool identical = true, differs = false;
  for (uint32_t c = 0; c < 15; ++c) {
    if (std::memcmp(model.column(Matrix::kSymbols, c),
                    same.column(Matrix::kSymbols, c), 8 * sizeof(float)) != 0) {
      identical = false;
    }
    if (std::memcmp(model.column(Matrix::kSymbols, c),
                    other.column(Matrix::kSymbols, c),
                    8 * sizeof(float)) != 0) {
      differs = true;
    }
  }
  CHECK(identical);
  CHECK(differs);

  CHECK_THROWS_AS(EmbeddingModel(5, 5, SmallHyper(0, 1)),
                  std::invalid_argument);
}

TEST_CASE("Embed is an exact weighted column sum") {
  EmbeddingModel model(12, 9, SmallHyper(6, 5));
  DenseModel dense = DenseModel::From(model);
  std::mt19937_64 rng(123);

  for (int trial = 0; trial < 50; ++trial) {
    SparseVector v = RandomVector(12, 6, rng);
    std::vector<double> got = model.Embed(Matrix::kVocab, v);
    std::vector<double> want = dense.Embed(Matrix::kVocab, v);
    REQUIRE(got.size() == 6);
    for (uint32_t r = 0; r < 6; ++r) {
      CHECK(got[r] == doctest::Approx(want[r]).epsilon(1e-12));
    }
  }

  // The zero vector embeds to zero.
  std::vector<double> zero = model.Embed(Matrix::kSymbols, SparseVector{9, {}});
  for (double x : zero) CHECK(x == 0.0);
}

TEST_CASE("Embed is linear to 1e-10") {
  EmbeddingModel model(16, 10, SmallHyper(8, 21));
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    SparseVector u = RandomVector(16, 5, rng);
    SparseVector v = RandomVector(16, 5, rng);
    double a = 0.7, b = -1.3;

    SparseVectorBuilder combo(16);
    for (const auto& e : u.entries) combo.Add(e.index, a * e.weight);
    for (const auto& e : v.entries) combo.Add(e.index, b * e.weight);
    SparseVector w = std::move(combo).Build();

    std::vector<double> eu = model.Embed(Matrix::kVocab, u);
    std::vector<double> ev = model.Embed(Matrix::kVocab, v);
    std::vector<double> ew = model.Embed(Matrix::kVocab, w);
    for (uint32_t r = 0; r < 8; ++r) {
      CHECK(std::abs(ew[r] - (a * eu[r] + b * ev[r])) <= 1e-10);
    }
  }
}

TEST_CASE("EmbedConcat routes low indexes to vocab and high to symbols") {
  EmbeddingModel model(10, 7, SmallHyper(5, 9));
  std::mt19937_64 rng(11);

  for (int trial = 0; trial < 30; ++trial) {
    SparseVector concat = RandomVector(17, 8, rng);
    SparseVectorBuilder low(10), high(7);
    for (const auto& e : concat.entries) {
      if (e.index < 10) {
        low.Add(e.index, e.weight);
      } else {
        high.Add(e.index - 10, e.weight);
      }
    }
    std::vector<double> got = model.EmbedConcat(concat);
    std::vector<double> vocab_part =
        model.Embed(Matrix::kVocab, std::move(low).Build());
    std::vector<double> symbol_part =
        model.Embed(Matrix::kSymbols, std::move(high).Build());
    for (uint32_t r = 0; r < 5; ++r) {
      CHECK(got[r] ==
            doctest::Approx(vocab_part[r] + symbol_part[r]).epsilon(1e-12));
    }
  }
}

TEST_CASE("Scores are clamped cosines with the zero-vector convention") {
  EmbeddingModel model(14, 11, SmallHyper(7, 33));
  DenseModel dense = DenseModel::From(model);
  std::mt19937_64 rng(55);

  for (int trial = 0; trial < 60; ++trial) {
    SparseVector q = RandomVector(14, 5, rng);
    SparseVector f = RandomVector(11, 5, rng);
    double got = model.ScoreQa(q, f);
    CHECK(got >= -1.0);
    CHECK(got <= 1.0);

    double want = dense.Cosine(dense.Embed(Matrix::kVocab, q),
                               dense.Embed(Matrix::kSymbols, f));
    want = std::min(1.0, std::max(-1.0, want));
    CHECK(got == doctest::Approx(want).epsilon(1e-12));

    SparseVector q2 = RandomVector(14, 5, rng);
    double para = model.ScoreParaphrase(q, q2);
    double para_want = dense.Cosine(dense.Embed(Matrix::kVocab, q),
                                    dense.Embed(Matrix::kVocab, q2));
    para_want = std::min(1.0, std::max(-1.0, para_want));
    CHECK(para == doctest::Approx(para_want).epsilon(1e-12));

    SparseVector h = RandomVector(25, 6, rng);
    double ext = model.ScoreExternal(q, h);
    CHECK(ext >= -1.0);
    CHECK(ext <= 1.0);
  }

  // Zero on either side scores exactly 0.
  SparseVector empty14{14, {}};
  SparseVector empty11{11, {}};
  SparseVector q = RandomVector(14, 4, rng);
  CHECK(model.ScoreQa(empty14, MakeVector(11, {{0, 1.0}})) == 0.0);
  CHECK(model.ScoreQa(q, empty11) == 0.0);

  // Identical sides score 1 up to rounding.
  CHECK(model.ScoreParaphrase(q, q) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CosineSimilarity on dense vectors") {
  std::vector<double> x{1.0, 0.0};
  std::vector<double> y{0.0, 2.0};
  std::vector<double> z{-3.0, 0.0};
  std::vector<double> zero{0.0, 0.0};
  CHECK(CosineSimilarity(x, y) == 0.0);
  CHECK(CosineSimilarity(x, x) == 1.0);
  CHECK(CosineSimilarity(x, z) == -1.0);
  CHECK(CosineSimilarity(x, zero) == 0.0);
  CHECK(CosineSimilarity(zero, zero) == 0.0);
}

TEST_CASE("ProjectColumn rescales only columns outside the unit ball") {
  EmbeddingModel model(4, 4, SmallHyper(2, 1));
  float* col = model.column(Matrix::kVocab, 0);
  col[0] = 3.0f;
  col[1] = 4.0f;
  model.ProjectColumn(Matrix::kVocab, 0);
  CHECK(col[0] == doctest::Approx(0.6f));
  CHECK(col[1] == doctest::Approx(0.8f));
  CHECK(model.ColumnNorm(Matrix::kVocab, 0) == doctest::Approx(1.0));

  // A column already inside the ball is untouched, bit for bit.
  float* inside = model.column(Matrix::kVocab, 1);
  inside[0] = 0.25f;
  inside[1] = -0.5f;
  float before[2] = {inside[0], inside[1]};
  model.ProjectColumn(Matrix::kVocab, 1);
  CHECK(std::memcmp(before, inside, sizeof(before)) == 0);

  // Direction is preserved for projected columns.
  float* dir = model.column(Matrix::kSymbols, 2);
  dir[0] = 5.0f;
  dir[1] = -12.0f;
  model.ProjectColumn(Matrix::kSymbols, 2);
  CHECK(dir[0] / dir[1] == doctest::Approx(5.0 / -12.0).epsilon(1e-6));

  model.ProjectAllColumns();
  for (uint32_t c = 0; c < 4; ++c) {
    CHECK(model.ColumnNorm(Matrix::kVocab, c) <= 1.0 + 1e-6);
    CHECK(model.ColumnNorm(Matrix::kSymbols, c) <= 1.0 + 1e-6);
  }
}

TEST_CASE("EnsembleScoreQa sums member scores") {
  EmbeddingModel m1(9, 6, SmallHyper(4, 1));
  EmbeddingModel m2(9, 6, SmallHyper(4, 2));
  std::mt19937_64 rng(3);
  SparseVector q = RandomVector(9, 4, rng);
  SparseVector f = RandomVector(6, 3, rng);

  const EmbeddingModel* solo[] = {&m1};
  CHECK(EnsembleScoreQa(solo, q, f) == m1.ScoreQa(q, f));

  const EmbeddingModel* both[] = {&m1, &m2};
  CHECK(EnsembleScoreQa(both, q, f) ==
        doctest::Approx(m1.ScoreQa(q, f) + m2.ScoreQa(q, f)).epsilon(1e-12));

  std::vector<const EmbeddingModel*> none;
  CHECK_THROWS_AS(EnsembleScoreQa(none, q, f), std::invalid_argument);
  EmbeddingModel odd(9, 7, SmallHyper(4, 3));
  const EmbeddingModel* mixed[] = {&m1, &odd};
  CHECK_THROWS_AS(EnsembleScoreQa(mixed, q, f), std::invalid_argument);
}

TEST_CASE("Model files round-trip bit for bit") {
  EmbeddingModel model(13, 8, SmallHyper(5, 44));
  // Touch the adagrad state so it is not all zeros.
  model.adagrad_column(Matrix::kVocab, 3)[2] = 0.625f;

  TempDir dir;
  std::string path = dir.File("model.bin");
  model.Save(path);
  EmbeddingModel loaded = EmbeddingModel::Load(path);

  CHECK(loaded.SameShape(model));
  CHECK(loaded.hyper() == model.hyper());
  for (uint32_t c = 0; c < 13; ++c) {
    CHECK(std::memcmp(loaded.column(Matrix::kVocab, c),
                      model.column(Matrix::kVocab, c), 5 * sizeof(float)) == 0);
    CHECK(std::memcmp(loaded.adagrad_column(Matrix::kVocab, c),
                      model.adagrad_column(Matrix::kVocab, c),
                      5 * sizeof(float)) == 0);
  }
  for (uint32_t c = 0; c < 8; ++c) {
    CHECK(std::memcmp(loaded.column(Matrix::kSymbols, c),
                      model.column(Matrix::kSymbols, c),
                      5 * sizeof(float)) == 0);
  }

  // Saving the loaded model reproduces the file byte for byte.
  std::string again = dir.File("model2.bin");
  loaded.Save(again);
  CHECK(FileBytes(path) == FileBytes(again));
}

TEST_CASE("Model loading rejects corrupt files with an offset") {
  EmbeddingModel model(6, 4, SmallHyper(3, 7));
  TempDir dir;
  std::string path = dir.File("model.bin");
  model.Save(path);
  std::string bytes = FileBytes(path);

  // Truncation.
  std::string cut = dir.File("cut.bin");
  WriteFile(cut, bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_WITH_AS(EmbeddingModel::Load(cut), doctest::Contains("offset"),
                       std::runtime_error);

  // Trailing garbage.
  std::string fat = dir.File("fat.bin");
  WriteFile(fat, bytes + "xx");
  CHECK_THROWS_AS(EmbeddingModel::Load(fat), std::runtime_error);

  // Bad magic.
  std::string junk = dir.File("junk.bin");
  WriteFile(junk, "NOTAMODELNOTAMODEL");
  CHECK_THROWS_WITH_AS(EmbeddingModel::Load(junk), doctest::Contains("magic"),
                       std::runtime_error);

  // Unsupported version: flip the version field after the 8-byte magic.
  std::string versioned = dir.File("versioned.bin");
  std::string mutated = bytes;
  mutated[8] = static_cast<char>(0x77);
  WriteFile(versioned, mutated);
  CHECK_THROWS_WITH_AS(EmbeddingModel::Load(versioned),
                       doctest::Contains("version"), std::runtime_error);

  CHECK_THROWS_AS(EmbeddingModel::Load(dir.File("absent.bin")),
                  std::runtime_error);
}

TEST_CASE("Stream save equals file save") {
  EmbeddingModel model(5, 5, SmallHyper(4, 123));
  TempDir dir;
  std::string path = dir.File("model.bin");
  model.Save(path);

  std::ostringstream buffer;
  model.Save(buffer);
  CHECK(buffer.str() == FileBytes(path));

  std::istringstream in(buffer.str());
  EmbeddingModel loaded = EmbeddingModel::Load(in);
  CHECK(loaded.SameShape(model));
}
