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
// Command line front end: preprocessing, question generation, distant
// supervision, training, evaluation, answering, and memory extension.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memnet/eval_answer.h"
#include "memnet/memory_extend.h"
#include "memnet/qa_dataset.h"
#include "memnet/supervision.h"
#include "memnet/trainer.h"

namespace {

using namespace memnet;

// A store plus everything that keeps its symbols alive.
struct KbBundle {
  SymbolInterner interner;
  std::vector<AtomicFact> atomic;
  GroupedFactStore store;
  std::vector<AliasRecord> alias_records;
  AliasIndex aliases;
};

std::unique_ptr<KbBundle> LoadKb(const std::string& kb_path,
                                 const std::string& aliases_path) {
  auto kb = std::make_unique<KbBundle>();
  kb->atomic = LoadGroupedTriples(kb_path, kb->interner);
  kb->store = GroupFacts(kb->atomic, kb->interner);
  if (!aliases_path.empty()) {
    kb->alias_records = LoadAliasRecords(aliases_path, kb->interner);
    kb->aliases = BuildAliasIndex(kb->alias_records);
  }
  return kb;
}

EncoderTables LoadTables(const std::string& prefix, SymbolInterner& interner) {
  return EncoderTables{SymbolTable::Load(prefix + ".symbols.tsv", interner),
                       VocabTable::Load(prefix + ".vocab.tsv")};
}

void SaveTables(const EncoderTables& tables, const std::string& prefix) {
  tables.symbols.Save(prefix + ".symbols.tsv");
  tables.vocab.Save(prefix + ".vocab.tsv");
}

std::string CanonicalOrSymbol(EntityId entity, const GroupedFactStore& store,
                              const AliasIndex& aliases) {
  std::optional<std::string_view> name = aliases.CanonicalName(entity);
  return name.has_value() ? std::string(*name) : store.SymbolOf(entity);
}

std::vector<const EmbeddingModel*> Pointers(
    const std::vector<EmbeddingModel>& models) {
  std::vector<const EmbeddingModel*> out;
  out.reserve(models.size());
  for (const EmbeddingModel& m : models) out.push_back(&m);
  return out;
}

void PrintPrediction(const Prediction& prediction, size_t top,
                     const GroupedFactStore& store, const AliasIndex& aliases) {
  if (prediction.no_candidates) {
    std::cout << "  (no candidates)\n";
    return;
  }
  size_t shown = std::min(top, prediction.ranked.size());
  for (size_t i = 0; i < shown; ++i) {
    const ScoredFact& scored = prediction.ranked[i];
    const GroupedFact& fact = store.fact(scored.fact_index);
    std::cout << "  " << (i + 1) << ". [" << scored.score << "] "
              << store.SymbolOf(fact.subject) << " "
              << store.SymbolOf(fact.relationship) << " ->";
    for (EntityId o : fact.objects) {
      std::cout << " " << CanonicalOrSymbol(o, store, aliases);
    }
    std::cout << "\n";
  }
}

int RunPrep(const std::string& triples_path, const std::string& mediators_path,
            const std::string& aliases_path,
            const std::vector<std::string>& question_paths,
            const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  SymbolInterner interner;
  std::vector<AtomicFact> atomic = LoadTriples(triples_path, interner);
  std::cout << "atomic facts: " << atomic.size() << "\n";

  if (!mediators_path.empty()) {
    MediatorSpec spec = MediatorSpec::LoadFromFile(mediators_path);
    CollapseStats stats;
    atomic = CollapseMediators(atomic, spec, interner, &stats);
    std::cout << "mediator facts removed: " << stats.mediator_facts_removed
              << "\ncondensed facts: " << stats.condensed_facts
              << "\ndangling mediators: " << stats.dangling_mediators << "\n";
  }

  GroupedFactStore store = GroupFacts(atomic, interner);
  std::cout << "grouped facts: " << store.size()
            << "\nentities: " << store.entities().size()
            << "\nrelationships: " << store.relationships().size() << "\n";

  std::string facts_path = out_dir + "/facts.tsv";
  SaveGroupedFacts(store, facts_path);
  std::cout << "wrote " << facts_path << "\n";

  SymbolTable symbols = SymbolTable::Build(store);
  symbols.Save(out_dir + "/tables.symbols.tsv");
  std::cout << "wrote " << out_dir << "/tables.symbols.tsv ("
            << symbols.size() << " columns)\n";

  if (!aliases_path.empty()) {
    std::vector<AliasRecord> records =
        LoadAliasRecords(aliases_path, interner);
    AliasIndex aliases = BuildAliasIndex(records);
    std::cout << "alias records: " << records.size()
              << ", keys: " << aliases.num_keys() << "\n";

    std::vector<std::string> corpus;
    for (const std::string& path : question_paths) {
      QaFile file = LoadQaExamples(path, store);
      if (file.skipped > 0) {
        std::cout << path << ": skipped " << file.skipped
                  << " lines naming unknown facts\n";
      }
      for (QAExample& ex : file.examples) {
        corpus.push_back(std::move(ex.question));
      }
    }
    VocabTable vocab = VocabTable::Build(corpus, aliases);
    vocab.Save(out_dir + "/tables.vocab.tsv");
    std::cout << "wrote " << out_dir << "/tables.vocab.tsv (" << vocab.size()
              << " columns)\n";
  }
  return 0;
}

int RunGenSynthetic(const std::string& kb_path, const std::string& aliases_path,
                    const std::string& out_path, size_t max_objects,
                    size_t weighted, uint64_t seed) {
  std::unique_ptr<KbBundle> kb = LoadKb(kb_path, aliases_path);
  SyntheticConfig config;
  config.max_objects = max_objects;
  config.weighted_sample_count = weighted;
  config.seed = seed;
  SyntheticStats stats;
  std::vector<QAExample> questions =
      GenerateSynthetic(kb->store, kb->aliases, config, &stats);
  SaveQaExamples(questions, kb->store, out_path);
  std::cout << "emitted: " << stats.emitted
            << "\nskipped (too many objects): " << stats.skipped_object_count
            << "\nskipped (no subject alias): " << stats.skipped_no_alias
            << "\nwrote " << out_path << "\n";
  return 0;
}

int RunLabelDistant(const std::string& kb_path, const std::string& aliases_path,
                    const std::string& in_path, const std::string& out_path) {
  std::unique_ptr<KbBundle> kb = LoadKb(kb_path, aliases_path);
  std::vector<AnswerLabeledQuestion> items = LoadAnswerLabeled(in_path);
  DistantStats stats;
  std::vector<QAExample> examples = LabelDistantAll(
      items, kb->store, kb->aliases, WordLists::Defaults(), &stats);
  SaveQaExamples(examples, kb->store, out_path);
  std::cout << "labeled: " << stats.labeled
            << "\ndiscarded: " << stats.discarded << "\nwrote " << out_path
            << "\n";
  return 0;
}

struct TrainArgs {
  std::string kb;
  std::string aliases;
  std::vector<std::string> train_paths;
  std::string valid_path;
  std::string paraphrases_path;
  std::string out_prefix;
  std::string init_model;
  std::string tables_prefix;
  bool synthetic = false;
  std::string policy = "default";
  std::string metric = "path";
  uint32_t dim = 64;
  double learning_rate = 0.1;
  double margin = 0.1;
  double paraphrase_prob = 0.2;
  double multi_corrupt_prob = 0.3;
  uint32_t warp_trials = 50;
  uint64_t seed = 1;
  uint32_t threads = 1;
  uint64_t eval_every = 0;
  uint32_t patience = 5;
  uint64_t max_steps = 0;
  bool verbose = false;
};

int RunTrain(const TrainArgs& args) {
  std::unique_ptr<KbBundle> kb = LoadKb(args.kb, args.aliases);

  std::vector<TrainDataset> sources;
  for (const std::string& path : args.train_paths) {
    QaFile file = LoadQaExamples(path, kb->store);
    if (file.skipped > 0) {
      std::cout << path << ": skipped " << file.skipped
                << " lines naming unknown facts\n";
    }
    TrainDataset dataset;
    dataset.name = std::filesystem::path(path).stem().string();
    dataset.synthetic = args.synthetic;
    dataset.examples = std::move(file.examples);
    sources.push_back(std::move(dataset));
  }

  std::vector<QAExample> validation;
  if (!args.valid_path.empty()) {
    QaFile file = LoadQaExamples(args.valid_path, kb->store);
    validation = std::move(file.examples);
  }

  std::optional<ParaphraseSet> paraphrases;
  if (!args.paraphrases_path.empty()) {
    ParaphraseFileStats stats;
    paraphrases = LoadParaphrases(args.paraphrases_path, &stats);
    std::cout << "paraphrase clusters: " << stats.clusters_kept
              << " (dropped " << stats.dropped_small << " singletons)\n";
  }

  EncoderTables tables;
  if (!args.tables_prefix.empty()) {
    tables = LoadTables(args.tables_prefix, kb->interner);
  } else {
    std::vector<std::string> corpus;
    for (const TrainDataset& source : sources) {
      for (const QAExample& ex : source.examples) {
        corpus.push_back(ex.question);
      }
    }
    for (const QAExample& ex : validation) corpus.push_back(ex.question);
    if (paraphrases.has_value()) {
      for (size_t i = 0; i < paraphrases->total_questions(); ++i) {
        corpus.push_back(paraphrases->question(i));
      }
    }
    tables = BuildTables(kb->store, kb->aliases, corpus);
  }

  TrainConfig config;
  config.hyper.dim = args.dim;
  config.hyper.learning_rate = args.learning_rate;
  config.hyper.margin = args.margin;
  config.hyper.paraphrase_prob = args.paraphrase_prob;
  config.hyper.multi_corrupt_prob = args.multi_corrupt_prob;
  config.hyper.warp_max_trials = args.warp_trials;
  config.hyper.seed = args.seed;
  config.policy = args.policy == "candidates" ? NegativePolicy::kCandidates
                                              : NegativePolicy::kDefault;
  config.threads = args.threads;
  config.eval_every = args.eval_every;
  config.patience = args.patience;
  config.max_steps = args.max_steps;
  config.metric =
      args.metric == "f1" ? EvalMetric::kF1 : EvalMetric::kPathAccuracy;
  config.verbose = args.verbose;

  std::optional<EmbeddingModel> init;
  if (!args.init_model.empty()) {
    init = EmbeddingModel::Load(args.init_model);
    config.init_model = &*init;
  }

  TrainState state =
      Train(sources, paraphrases.has_value() ? &*paraphrases : nullptr,
            kb->store, tables, kb->aliases, validation, config);

  state.model.Save(args.out_prefix + ".model");
  SaveTables(tables, args.out_prefix);
  std::cout << "steps: " << state.steps
            << "\nbest validation " << args.metric << ": "
            << state.best_metric
            << "\nqa steps: " << state.counters.qa_steps
            << ", paraphrase steps: " << state.counters.paraphrase_steps
            << "\nviolations: " << state.counters.violations
            << ", exhausted searches: " << state.counters.exhausted_searches
            << "\nwrote " << args.out_prefix << ".model (+ tables)\n";
  return 0;
}

struct EvalArgs {
  std::string kb;
  std::string aliases;
  std::string tables_prefix;
  std::string metric = "path";
  std::string questions_path;
  std::string answers_path;
  std::string rerank_path;
  std::vector<std::string> ensemble;
  std::string subgraph_path;
  bool per_question = false;
};

int RunEval(const EvalArgs& args) {
  std::unique_ptr<KbBundle> kb = LoadKb(args.kb, args.aliases);
  EncoderTables tables = LoadTables(args.tables_prefix, kb->interner);

  std::vector<EmbeddingModel> models;
  for (const std::string& path : args.ensemble) {
    models.push_back(EmbeddingModel::Load(path));
  }

  if (args.metric == "rerank") {
    if (models.size() != 1) {
      throw std::invalid_argument("rerank takes exactly one --ensemble model");
    }
    std::vector<RerankQuestion> questions = LoadRerankFile(args.rerank_path);
    EvalReport report =
        EvalRerank(questions, models[0], kb->store, kb->aliases, tables);
    std::cout << "rerank accuracy: " << report.value << " over "
              << report.evaluated << " questions (skipped " << report.skipped
              << ")\nrandom baseline: " << RerankRandomBaseline(questions)
              << "\n";
    return 0;
  }

  std::optional<EmbeddingModel> subgraph;
  AnswerOptions options;
  options.models = Pointers(models);
  if (!args.subgraph_path.empty()) {
    subgraph = EmbeddingModel::Load(args.subgraph_path);
    options.subgraph_model = &*subgraph;
  }

  std::vector<std::string> question_texts;
  std::vector<QAExample> gold_examples;
  std::vector<std::vector<std::string>> gold_answers;
  if (!args.answers_path.empty()) {
    for (AnswerLabeledQuestion& item : LoadAnswerLabeled(args.answers_path)) {
      question_texts.push_back(std::move(item.question));
      gold_answers.push_back(std::move(item.answers));
    }
  } else {
    QaFile file = LoadQaExamples(args.questions_path, kb->store);
    if (file.skipped > 0) {
      std::cout << "skipped " << file.skipped
                << " lines naming unknown facts\n";
    }
    gold_examples = std::move(file.examples);
    for (const QAExample& ex : gold_examples) {
      question_texts.push_back(ex.question);
      std::set<std::string> names;
      for (uint32_t idx : ex.fact_indices) {
        for (EntityId o : kb->store.fact(idx).objects) {
          names.insert(CanonicalOrSymbol(o, kb->store, kb->aliases));
        }
      }
      gold_answers.emplace_back(names.begin(), names.end());
    }
  }

  std::vector<Prediction> predictions;
  predictions.reserve(question_texts.size());
  for (const std::string& question : question_texts) {
    predictions.push_back(
        Answer(question, kb->store, tables, kb->aliases, options));
  }

  EvalReport report;
  if (args.metric == "f1") {
    report = EvalF1(predictions, gold_answers, kb->store, kb->aliases);
  } else {
    if (gold_examples.empty()) {
      throw std::invalid_argument(
          "path accuracy needs --questions with gold facts");
    }
    report = EvalPathAccuracy(predictions, gold_examples, kb->store);
  }
  std::cout << report.metric << ": " << report.value << " over "
            << report.evaluated << " questions\n";
  if (args.per_question) {
    for (size_t i = 0; i < report.per_question.size(); ++i) {
      std::cout << report.per_question[i] << "\t" << question_texts[i] << "\n";
    }
  }
  return 0;
}

int RunAnswer(const std::string& kb_path, const std::string& aliases_path,
              const std::string& tables_prefix,
              const std::vector<std::string>& ensemble,
              const std::string& subgraph_path,
              const std::vector<std::string>& questions, size_t top) {
  std::unique_ptr<KbBundle> kb = LoadKb(kb_path, aliases_path);
  EncoderTables tables = LoadTables(tables_prefix, kb->interner);

  std::vector<EmbeddingModel> models;
  for (const std::string& path : ensemble) {
    models.push_back(EmbeddingModel::Load(path));
  }
  std::optional<EmbeddingModel> subgraph;
  AnswerOptions options;
  options.models = Pointers(models);
  if (!subgraph_path.empty()) {
    subgraph = EmbeddingModel::Load(subgraph_path);
    options.subgraph_model = &*subgraph;
  }

  auto answer_one = [&](const std::string& question) {
    Prediction prediction =
        Answer(question, kb->store, tables, kb->aliases, options);
    std::cout << question << "\n";
    PrintPrediction(prediction, top, kb->store, kb->aliases);
  };

  if (!questions.empty()) {
    for (const std::string& q : questions) answer_one(q);
  } else {
    std::string line;
    while (std::getline(std::cin, line)) {
      if (!line.empty()) answer_one(line);
    }
  }
  return 0;
}

int RunAddFacts(const std::string& kb_path, const std::string& aliases_path,
                const std::string& tables_prefix, const std::string& facts_path,
                const std::vector<std::string>& questions, size_t top) {
  std::unique_ptr<KbBundle> kb = LoadKb(kb_path, aliases_path);
  EncoderTables tables = LoadTables(tables_prefix, kb->interner);

  std::vector<ExternalFactInput> inputs = LoadExternalFacts(facts_path);
  ExternalStore external = AddExternalFacts(inputs, kb->store, kb->aliases,
                                            tables.symbols, tables.vocab);
  const LinkStats& stats = external.stats();
  std::cout << "external facts: " << stats.facts
            << "\nlinked subjects: " << stats.linked_subjects
            << "\nlinked objects: " << stats.linked_objects
            << "\nlink rate: " << stats.LinkRate() << "\n";

  for (const std::string& question : questions) {
    std::cout << question << "\n";
    std::vector<uint32_t> hits =
        ExternalCandidates(question, external, kb->store, kb->aliases,
                           WordLists::Defaults(), top);
    if (hits.empty()) std::cout << "  (no candidates)\n";
    for (uint32_t idx : hits) {
      const ExternalFact& fact = external.fact(idx);
      std::cout << "  " << fact.input.subject << " | " << fact.input.relation
                << " | " << fact.input.object;
      if (fact.subject_link.has_value()) {
        std::cout << "  [subject=" << kb->store.SymbolOf(*fact.subject_link)
                  << "]";
      }
      if (fact.object_link.has_value()) {
        std::cout << "  [object=" << kb->store.SymbolOf(*fact.object_link)
                  << "]";
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int RunInspect(const std::string& model_path, const std::string& kb_path,
               const std::string& aliases_path) {
  if (!model_path.empty()) {
    EmbeddingModel model = EmbeddingModel::Load(model_path);
    const Hyperparams& hyper = model.hyper();
    std::cout << "model: dim=" << model.dim()
              << " vocab=" << model.num_vocab()
              << " symbols=" << model.num_symbols()
              << "\nhyper: lr=" << hyper.learning_rate
              << " margin=" << hyper.margin
              << " paraphrase_prob=" << hyper.paraphrase_prob
              << " multi_corrupt=" << hyper.multi_corrupt_prob
              << " warp_trials=" << hyper.warp_max_trials
              << " seed=" << hyper.seed << "\n";
    for (Matrix m : {Matrix::kVocab, Matrix::kSymbols}) {
      double lo = 1e300, hi = 0.0, sum = 0.0;
      uint32_t cols = model.num_columns(m);
      for (uint32_t c = 0; c < cols; ++c) {
        double norm = model.ColumnNorm(m, c);
        lo = std::min(lo, norm);
        hi = std::max(hi, norm);
        sum += norm;
      }
      std::cout << (m == Matrix::kVocab ? "vocab" : "symbol")
                << " column norms: min=" << lo << " mean=" << sum / cols
                << " max=" << hi << "\n";
    }
  }
  if (!kb_path.empty()) {
    std::unique_ptr<KbBundle> kb = LoadKb(kb_path, aliases_path);
    size_t max_degree = 0, total_objects = 0;
    for (EntityId e : kb->store.entities()) {
      max_degree = std::max(max_degree, kb->store.EntityDegree(e));
    }
    for (const GroupedFact& fact : kb->store.facts()) {
      total_objects += fact.objects.size();
    }
    std::cout << "kb: grouped facts=" << kb->store.size()
              << " entities=" << kb->store.entities().size()
              << " relationships=" << kb->store.relationships().size()
              << "\nobjects per fact: "
              << (kb->store.size() == 0
                      ? 0.0
                      : double(total_objects) / kb->store.size())
              << " (mean), max entity degree: " << max_degree << "\n";
    if (!aliases_path.empty()) {
      std::cout << "aliases: records=" << kb->alias_records.size()
                << " keys=" << kb->aliases.num_keys()
                << " empty-skipped=" << kb->aliases.stats().skipped_empty
                << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-based question answering over a grouped fact store"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");

  // prep
  std::string triples, mediators, aliases, out_dir;
  std::vector<std::string> corpus_paths;
  CLI::App* prep = app.add_subcommand(
      "prep", "Collapse mediators, group triples, and build tables");
  prep->add_option("--triples", triples, "Tab-separated atomic triples")
      ->required();
  prep->add_option("--mediators", mediators,
                   "Mediator spec file (ids and pattern: prefixes)");
  prep->add_option("--aliases", aliases, "entity<TAB>alias records");
  prep->add_option("--questions", corpus_paths,
                   "QA files whose questions seed the vocabulary");
  prep->add_option("--out-dir", out_dir, "Output directory")->required();

  // gen-synthetic
  std::string gs_kb, gs_aliases, gs_out;
  size_t gs_max_objects = 10, gs_weighted = 0;
  uint64_t gs_seed = 1;
  CLI::App* gen = app.add_subcommand(
      "gen-synthetic", "Generate template questions from stored facts");
  gen->add_option("--kb", gs_kb, "Grouped facts file")->required();
  gen->add_option("--aliases", gs_aliases, "entity<TAB>alias records")
      ->required();
  gen->add_option("--out", gs_out, "Output QA file")->required();
  gen->add_option("--max-objects", gs_max_objects,
                  "Skip facts with more objects than this");
  gen->add_option("--weighted", gs_weighted,
                  "Draw this many questions weighted by inverse relationship "
                  "frequency (0 = one per fact)");
  gen->add_option("--seed", gs_seed, "Sampling seed");

  // label-distant
  std::string ld_kb, ld_aliases, ld_in, ld_out;
  CLI::App* label = app.add_subcommand(
      "label-distant", "Attach supporting facts to answer-labeled questions");
  label->add_option("--kb", ld_kb, "Grouped facts file")->required();
  label->add_option("--aliases", ld_aliases, "entity<TAB>alias records")
      ->required();
  label->add_option("--in", ld_in, "question<TAB>answer[|answer...] file")
      ->required();
  label->add_option("--out", ld_out, "Output QA file")->required();

  // train
  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train an embedding model");
  train->add_option("--kb", train_args.kb, "Grouped facts file")->required();
  train->add_option("--aliases", train_args.aliases,
                    "entity<TAB>alias records")
      ->required();
  train->add_option("--train", train_args.train_paths, "QA files, one source each")
      ->required();
  train->add_option("--valid", train_args.valid_path, "Validation QA file");
  train->add_option("--paraphrases", train_args.paraphrases_path,
                    "Tab-separated paraphrase clusters, one per line");
  train->add_option("--out", train_args.out_prefix,
                    "Output prefix for .model and table files")
      ->required();
  train->add_option("--init-model", train_args.init_model,
                    "Warm-start model (use with --tables)");
  train->add_option("--tables", train_args.tables_prefix,
                    "Load tables with this prefix instead of rebuilding");
  train->add_flag("--synthetic", train_args.synthetic,
                  "Mark the training sources as template-generated");
  train->add_option("--policy", train_args.policy,
                    "Negative sampling policy")
      ->check(CLI::IsMember({"default", "candidates"}));
  train->add_option("--metric", train_args.metric, "Validation metric")
      ->check(CLI::IsMember({"path", "f1"}));
  train->add_option("--dim", train_args.dim, "Embedding dimension");
  train->add_option("--lr", train_args.learning_rate, "Learning rate");
  train->add_option("--margin", train_args.margin, "Ranking margin");
  train->add_option("--paraphrase-prob", train_args.paraphrase_prob,
                    "Paraphrase task probability");
  train->add_option("--multi-corrupt", train_args.multi_corrupt_prob,
                    "Probability of corrupting a second fact element");
  train->add_option("--warp-trials", train_args.warp_trials,
                    "Negative draws per violator search");
  train->add_option("--seed", train_args.seed, "Training seed");
  train->add_option("--threads", train_args.threads, "Worker threads");
  train->add_option("--eval-every", train_args.eval_every,
                    "Steps between validations (0 = smallest source size)");
  train->add_option("--patience", train_args.patience,
                    "Validations without improvement before stopping");
  train->add_option("--steps", train_args.max_steps,
                    "Step cap (0 = until early stopping)");
  train->add_flag("--verbose", train_args.verbose, "Log validation points");

  // eval
  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a model or ensemble");
  eval->add_option("--kb", eval_args.kb, "Grouped facts file")->required();
  eval->add_option("--aliases", eval_args.aliases, "entity<TAB>alias records")
      ->required();
  eval->add_option("--tables", eval_args.tables_prefix,
                   "Table file prefix saved by train")
      ->required();
  eval->add_option("--metric", eval_args.metric, "What to measure")
      ->check(CLI::IsMember({"path", "f1", "rerank"}));
  eval->add_option("--questions", eval_args.questions_path,
                   "QA file with gold facts");
  eval->add_option("--answers", eval_args.answers_path,
                   "question<TAB>answer[|answer...] file (f1 gold)");
  eval->add_option("--rerank", eval_args.rerank_path,
                   "Labeled rerank candidate file");
  eval->add_option("--ensemble", eval_args.ensemble,
                   "Model files; scores sum across them")
      ->required();
  eval->add_option("--subgraph", eval_args.subgraph_path,
                   "Second model scored over neighborhood encodings");
  eval->add_flag("--per-question", eval_args.per_question,
                 "Print one score per question");

  // answer
  std::string an_kb, an_aliases, an_tables, an_subgraph;
  std::vector<std::string> an_ensemble, an_questions;
  size_t an_top = 1;
  CLI::App* answer = app.add_subcommand(
      "answer", "Answer questions (flags or one per stdin line)");
  answer->add_option("--kb", an_kb, "Grouped facts file")->required();
  answer->add_option("--aliases", an_aliases, "entity<TAB>alias records")
      ->required();
  answer->add_option("--tables", an_tables, "Table file prefix")->required();
  answer->add_option("--ensemble", an_ensemble, "Model files")->required();
  answer->add_option("--subgraph", an_subgraph,
                     "Second model scored over neighborhood encodings");
  answer->add_option("--question", an_questions, "Question text (repeatable)");
  answer->add_option("--top", an_top, "Ranked facts to print");

  // add-facts
  std::string af_kb, af_aliases, af_tables, af_facts;
  std::vector<std::string> af_questions;
  size_t af_top = 5;
  CLI::App* add_facts = app.add_subcommand(
      "add-facts", "Link external facts into memory and query them");
  add_facts->add_option("--kb", af_kb, "Grouped facts file")->required();
  add_facts->add_option("--aliases", af_aliases, "entity<TAB>alias records")
      ->required();
  add_facts->add_option("--tables", af_tables, "Table file prefix")
      ->required();
  add_facts->add_option("--facts", af_facts,
                        "subject<TAB>relation<TAB>object lines")
      ->required();
  add_facts->add_option("--question", af_questions,
                        "Retrieve candidates for this question (repeatable)");
  add_facts->add_option("--top", af_top, "Candidates to print per question");

  // model inspect
  std::string in_model, in_kb, in_aliases;
  CLI::App* model_cmd = app.add_subcommand("model", "Model utilities");
  model_cmd->require_subcommand(1);
  CLI::App* inspect = model_cmd->add_subcommand(
      "inspect", "Describe a model or knowledge base");
  inspect->add_option("--model", in_model, "Model file");
  inspect->add_option("--kb", in_kb, "Grouped facts file");
  inspect->add_option("--aliases", in_aliases, "entity<TAB>alias records");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prep) {
      return RunPrep(triples, mediators, aliases, corpus_paths, out_dir);
    }
    if (*gen) {
      return RunGenSynthetic(gs_kb, gs_aliases, gs_out, gs_max_objects,
                             gs_weighted, gs_seed);
    }
    if (*label) return RunLabelDistant(ld_kb, ld_aliases, ld_in, ld_out);
    if (*train) return RunTrain(train_args);
    if (*eval) return RunEval(eval_args);
    if (*answer) {
      return RunAnswer(an_kb, an_aliases, an_tables, an_ensemble, an_subgraph,
                       an_questions, an_top);
    }
    if (*add_facts) {
      return RunAddFacts(af_kb, af_aliases, af_tables, af_facts, af_questions,
                         af_top);
    }
    if (*inspect) return RunInspect(in_model, in_kb, in_aliases);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
