// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clintext/corpus.hpp"
#include "clintext/evaluation.hpp"
#include "clintext/pipeline.hpp"
#include "clintext/search.hpp"
#include "json.hpp"

namespace clintext {

// One row of the experiment grid.
struct ModelSpec {
  std::string name;
  FeatureKind feature = FeatureKind::kTfidf;
  ClassifierKind classifier = ClassifierKind::kLogReg;
  std::filesystem::path embeddings;
  WeightPolicy weights;
  // Fixed parameters skip the search.
  std::optional<ParamSet> params;
  ParamSpace space;
  std::size_t n_iter = 10;
};

// Benchmark configuration, read from a single JSON document:
//
//   {
//     "corpus": "notes.jsonl",                    // or "synthetic": {...}
//     "preprocess": {"abbreviations": "a.json", "mask_terms": "m.txt",
//                    "apply_mask": true},         // all optional
//     "tfidf": {"max_features": 5000, "lemmatize": true},
//     "seeds": [42, 123, 999],
//     "cv_folds": 5,
//     "models": [
//       {"name": "TF-IDF + LR", "feature": "tfidf", "classifier": "logreg",
//        "class_weights": "balanced",             // "none" | [w0, w1]
//        "search": {"n_iter": 10, "space": {...}} // or "params": {...}
//       },
//       {"name": "MiniLM + LR", "feature": "embedding",
//        "embeddings": "vecs.jsonl", "classifier": "logreg"}
//     ],
//     "output_dir": "bench_out"
//   }
//
// Relative paths resolve against the config file's directory. The synthetic
// object takes the SynthConfig field names (n, prevalence, signal_strength,
// noise_rate, min_tokens, max_tokens, seed).
struct BenchConfig {
  std::filesystem::path corpus_path;
  std::optional<SynthConfig> synthetic;
  std::filesystem::path abbreviations;
  std::filesystem::path mask_terms;
  bool apply_mask = true;
  TfidfConfig tfidf;
  std::vector<std::uint64_t> seeds{42, 123, 999};
  std::size_t cv_folds = 5;
  std::vector<ModelSpec> models;
  std::filesystem::path output_dir = "bench_out";

  void Validate() const;
  static BenchConfig FromJson(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static BenchConfig Load(const std::filesystem::path& path);
};

// Metric columns of the report table.
struct MetricSummary {
  double accuracy = 0.0;
  std::array<ClassMetrics, 2> per_class;
  double auc_roc = 0.0;
  double threshold = 0.0;

  static MetricSummary From(const EvalReport& r);
  static MetricSummary Mean(const std::vector<EvalReport>& reports);
  nlohmann::json ToJson() const;
};

struct CellResult {
  std::uint64_t seed = 0;
  SplitIndices split;
  ParamSet params;
  std::optional<SearchResult> search;
  // Fitted on the training partition; empty for embedding rows.
  TfidfModel tfidf;
  double threshold = 0.5;
  EvalReport report;
};

struct ModelRow {
  std::string name;
  FeatureKind feature = FeatureKind::kTfidf;
  ClassifierKind classifier = ClassifierKind::kLogReg;
  std::vector<CellResult> cells;
  MetricSummary mean;
};

struct BenchResult {
  std::vector<ModelRow> rows;

  nlohmann::json ToJson() const;
};

// Shared per-run inputs: the corpus and its preprocessed tokens.
struct PreparedCorpus {
  Corpus corpus;
  std::vector<std::vector<std::string>> tokens;

  static PreparedCorpus Make(Corpus corpus, const PreprocessConfig& preprocess, const TfidfConfig& tfidf);
};

PreprocessConfig ResolvePreprocess(const BenchConfig& cfg);

// One (model, seed) cell: split with the seed, fit features on train, tune on
// train by k-fold CV, refit on train, pick the F1-max threshold on the
// validation partition and evaluate once on test.
CellResult RunCell(const PreparedCorpus& data, const ModelSpec& spec, const TfidfConfig& tfidf,
                   std::size_t cv_folds, std::uint64_t seed, const EmbeddingSet* embeddings);

BenchResult RunBenchmark(const BenchConfig& cfg);
BenchResult RunBenchmark(const BenchConfig& cfg, const PreparedCorpus& data);

// Decimal half-up rounding of the shortest round-trip representation, so
// 0.805 -> "0.81" and 0.815 -> "0.82".
std::string FormatHalfUp(double value, int decimals = 2);

// Markdown table: Model, Accuracy, Precision (0/1), Recall (0/1),
// F1-Score (0/1), AUC-ROC, using the seed means, rows in config order.
std::string RenderTable(const BenchResult& result);

// Writes table.md and results.json into dir (created if needed).
void WriteBenchOutputs(const BenchResult& result, const std::filesystem::path& dir);

}  // namespace clintext
