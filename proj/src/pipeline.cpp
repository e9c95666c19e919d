// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "clintext/error.hpp"

namespace clintext {

std::string ToString(FeatureKind kind) { return kind == FeatureKind::kTfidf ? "tfidf" : "embedding"; }

FeatureKind ParseFeatureKind(const std::string& name) {
  if (name == "tfidf") return FeatureKind::kTfidf;
  if (name == "embedding") return FeatureKind::kEmbedding;
  Fail(ErrorCode::kInvalidArgument, "unknown feature kind '" + name + "' (expected tfidf or embedding)");
}

std::vector<std::vector<std::string>> PrepareTokens(const Corpus& corpus, const PreprocessConfig& preprocess,
                                                    bool lemmatize) {
  const Lemmatizer* lemmatizer = lemmatize ? &Lemmatizer::Default() : nullptr;
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.size());
  for (const auto& note : corpus.notes()) out.push_back(Tokenize(PreprocessNote(note.text, preprocess), lemmatizer));
  return out;
}

FeatureMatrix EmbeddingFeatures(const EmbeddingSet& embeddings, const Corpus& corpus,
                                std::span<const std::size_t> indices) {
  std::vector<std::vector<double>> dense;
  dense.reserve(indices.size());
  for (auto i : indices) dense.push_back(embeddings.Pooled(corpus[i].id));
  auto m = FeatureMatrix::FromDense(dense);
  m.cols = embeddings.dim();
  return m;
}

std::vector<int> SelectLabels(const Corpus& corpus, std::span<const std::size_t> indices) {
  std::vector<int> y;
  y.reserve(indices.size());
  for (auto i : indices) y.push_back(corpus[i].label);
  return y;
}

PipelineModel PipelineModel::Train(const Corpus& corpus, std::span<const std::size_t> train,
                                   const TrainRequest& request, const EmbeddingSet* embeddings) {
  if (request.feature == FeatureKind::kEmbedding) return Train(corpus, {}, train, request, embeddings);
  return Train(corpus, PrepareTokens(corpus, request.preprocess, request.tfidf.lemmatize), train, request,
               embeddings);
}

PipelineModel PipelineModel::Train(const Corpus& corpus, const std::vector<std::vector<std::string>>& tokens,
                                   std::span<const std::size_t> train, const TrainRequest& request,
                                   const EmbeddingSet* embeddings) {
  if (train.empty()) Fail(ErrorCode::kInvalidArgument, "train: empty training partition");
  PipelineModel m;
  m.preprocess = request.preprocess;
  m.feature = request.feature;
  m.params = request.params;

  FeatureMatrix x;
  if (request.feature == FeatureKind::kTfidf) {
    if (tokens.size() != corpus.size()) Fail(ErrorCode::kInvalidArgument, "train: token cache does not match corpus");
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (auto i : train) docs.push_back(tokens.at(i));
    m.tfidf = TfidfModel::Fit(docs, request.tfidf);
    x = m.tfidf.TransformAll(docs);
  } else {
    if (!embeddings) Fail(ErrorCode::kValidation, "train: embedding features need an embeddings file");
    m.embedding_dim = embeddings->dim();
    m.encoder = embeddings->encoder();
    x = EmbeddingFeatures(*embeddings, corpus, train);
  }
  const auto y = SelectLabels(corpus, train);
  m.class_weights = request.weights.Resolve(y);
  WeightPolicy resolved;
  resolved.mode = WeightPolicy::Mode::kManual;
  resolved.manual = m.class_weights;
  m.classifier = TrainClassifier(request.classifier, request.params, x, y, resolved, request.seed);
  return m;
}

FeatureMatrix PipelineModel::Featurize(const Corpus& corpus, std::span<const std::size_t> indices,
                                       const EmbeddingSet* embeddings) const {
  if (feature == FeatureKind::kEmbedding) {
    if (!embeddings) Fail(ErrorCode::kValidation, "model uses embedding features; no embeddings file given");
    if (embeddings->dim() != embedding_dim) {
      Fail(ErrorCode::kValidation, "embeddings dim " + std::to_string(embeddings->dim()) +
                                       " does not match model dim " + std::to_string(embedding_dim));
    }
    return EmbeddingFeatures(*embeddings, corpus, indices);
  }
  const Lemmatizer* lemmatizer = tfidf.config().lemmatize ? &Lemmatizer::Default() : nullptr;
  FeatureMatrix m;
  m.cols = tfidf.size();
  for (auto i : indices) m.rows.push_back(tfidf.Transform(Tokenize(PreprocessNote(corpus[i].text, preprocess), lemmatizer)));
  return m;
}

FeatureMatrix PipelineModel::Featurize(const std::vector<std::vector<std::string>>& tokens,
                                       std::span<const std::size_t> indices) const {
  if (feature != FeatureKind::kTfidf) Fail(ErrorCode::kInvalidArgument, "token features need a tfidf model");
  FeatureMatrix m;
  m.cols = tfidf.size();
  for (auto i : indices) m.rows.push_back(tfidf.Transform(tokens.at(i)));
  return m;
}

std::vector<double> PipelineModel::Score(const Corpus& corpus, std::span<const std::size_t> indices,
                                         const EmbeddingSet* embeddings) const {
  return classifier.PredictAll(Featurize(corpus, indices, embeddings));
}

nlohmann::json PipelineModel::ToJson() const {
  nlohmann::json abbrev = nlohmann::json::array();
  for (const auto& [k, v] : preprocess.abbreviations) abbrev.push_back({k, v});
  nlohmann::json features = {{"kind", ToString(feature)}};
  if (feature == FeatureKind::kTfidf) {
    features["tfidf"] = tfidf.ToJson();
  } else {
    features["dim"] = embedding_dim;
    features["encoder"] = encoder;
  }
  return {{"format", "clintext-model"},
          {"version", 1},
          {"preprocess",
           {{"apply_mask", preprocess.apply_mask},
            {"abbreviations", abbrev},
            {"mask_terms", preprocess.mask_terms}}},
          {"features", features},
          {"class_weights", {class_weights.w0, class_weights.w1}},
          {"params", ParamSetToJson(params)},
          {"classifier", classifier.ToJson()}};
}

PipelineModel PipelineModel::FromJson(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != "clintext-model") {
      Fail(ErrorCode::kParse, "not a clintext model file");
    }
    PipelineModel m;
    const auto& pp = j.at("preprocess");
    m.preprocess.apply_mask = pp.at("apply_mask").get<bool>();
    m.preprocess.abbreviations.clear();
    for (const auto& kv : pp.at("abbreviations")) {
      m.preprocess.abbreviations.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    }
    m.preprocess.mask_terms = pp.at("mask_terms").get<std::vector<std::string>>();
    const auto& f = j.at("features");
    m.feature = ParseFeatureKind(f.at("kind").get<std::string>());
    if (m.feature == FeatureKind::kTfidf) {
      m.tfidf = TfidfModel::FromJson(f.at("tfidf"));
    } else {
      m.embedding_dim = f.at("dim").get<std::size_t>();
      m.encoder = f.value("encoder", std::string());
    }
    m.class_weights = {j.at("class_weights").at(0).get<double>(), j.at("class_weights").at(1).get<double>()};
    m.params = ParamSetFromJson(j.at("params"));
    m.classifier = Classifier::FromJson(j.at("classifier"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("model file: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) Fail(ErrorCode::kParse, e.what());
    throw;
  }
}

void PipelineModel::Save(const std::filesystem::path& path) const { WriteTextFile(path, ToJson().dump() + "\n"); }

PipelineModel PipelineModel::Load(const std::filesystem::path& path) { return FromJson(ReadJsonFile(path)); }

nlohmann::json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace clintext
