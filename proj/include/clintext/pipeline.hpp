// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clintext/corpus.hpp"
#include "clintext/featurize.hpp"
#include "clintext/models.hpp"
#include "clintext/preprocess.hpp"
#include "clintext/search.hpp"
#include "json.hpp"

namespace clintext {

enum class FeatureKind { kTfidf, kEmbedding };

std::string ToString(FeatureKind kind);
FeatureKind ParseFeatureKind(const std::string& name);

// Preprocessed and tokenized notes, one entry per corpus note. Each note is
// processed on its own, so the result for one note never depends on another.
std::vector<std::vector<std::string>> PrepareTokens(const Corpus& corpus, const PreprocessConfig& preprocess,
                                                    bool lemmatize);

// Mean-pooled embedding rows for the given corpus indices.
FeatureMatrix EmbeddingFeatures(const EmbeddingSet& embeddings, const Corpus& corpus,
                                std::span<const std::size_t> indices);

std::vector<int> SelectLabels(const Corpus& corpus, std::span<const std::size_t> indices);

struct TrainRequest {
  FeatureKind feature = FeatureKind::kTfidf;
  ClassifierKind classifier = ClassifierKind::kLogReg;
  ParamSet params;
  WeightPolicy weights;
  PreprocessConfig preprocess = PreprocessConfig::Default();
  TfidfConfig tfidf;
  std::uint64_t seed = 42;
};

// Preprocessing settings, fitted featurizer and classifier, persisted as one
// JSON document.
class PipelineModel {
 public:
  PreprocessConfig preprocess;
  FeatureKind feature = FeatureKind::kTfidf;
  TfidfModel tfidf;
  std::size_t embedding_dim = 0;
  std::string encoder;
  Classifier classifier;
  ClassWeights class_weights;
  ParamSet params;

  // Fits the featurizer and classifier on corpus[train] only.
  static PipelineModel Train(const Corpus& corpus, std::span<const std::size_t> train,
                             const TrainRequest& request, const EmbeddingSet* embeddings = nullptr);
  // Same, reusing tokens from PrepareTokens (ignored for embedding features).
  static PipelineModel Train(const Corpus& corpus, const std::vector<std::vector<std::string>>& tokens,
                             std::span<const std::size_t> train, const TrainRequest& request,
                             const EmbeddingSet* embeddings = nullptr);

  FeatureMatrix Featurize(const Corpus& corpus, std::span<const std::size_t> indices,
                          const EmbeddingSet* embeddings = nullptr) const;
  FeatureMatrix Featurize(const std::vector<std::vector<std::string>>& tokens,
                          std::span<const std::size_t> indices) const;

  std::vector<double> Score(const Corpus& corpus, std::span<const std::size_t> indices,
                            const EmbeddingSet* embeddings = nullptr) const;

  nlohmann::json ToJson() const;
  static PipelineModel FromJson(const nlohmann::json& j);
  void Save(const std::filesystem::path& path) const;
  static PipelineModel Load(const std::filesystem::path& path);
};

// Reads a JSON document from disk. Throws Error(kIo) or Error(kParse).
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace clintext
