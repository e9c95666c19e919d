// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/clintext.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <numeric>
#include <string>

#include "clintext/bench.hpp"
#include "clintext/corpus.hpp"
#include "clintext/error.hpp"
#include "clintext/evaluation.hpp"
#include "clintext/pipeline.hpp"
#include "clintext/preprocess.hpp"
#include "clintext/search.hpp"

struct ct_corpus {
  clintext::Corpus corpus;
};

struct ct_model {
  clintext::PipelineModel model;
};

namespace {

using namespace clintext;

thread_local std::string g_last_error;

ct_status ToStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return CT_INVALID_ARGUMENT;
    case ErrorCode::kIo: return CT_IO_ERROR;
    case ErrorCode::kParse: return CT_PARSE_ERROR;
    case ErrorCode::kValidation: return CT_VALIDATION_ERROR;
  }
  return CT_INTERNAL_ERROR;
}

template <typename F>
ct_status Guard(F&& body) {
  try {
    body();
    return CT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return CT_PARSE_ERROR;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CT_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CT_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return CT_INTERNAL_ERROR;
  }
}

void Require(const void* p, const char* what) {
  if (!p) Fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be null");
}

std::string Str(const char* s) { return s ? std::string(s) : std::string(); }

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

PreprocessConfig ToPreprocess(const ct_preprocess_options* opts) {
  if (!opts) return PreprocessConfig::Default();
  return PreprocessConfig::FromFiles(Str(opts->abbreviations_path), Str(opts->mask_terms_path),
                                     opts->apply_mask != 0);
}

WeightPolicy ParseWeights(const std::string& text) {
  WeightPolicy policy;
  if (text.empty() || text == "balanced") return policy;
  if (text == "none") {
    policy.mode = WeightPolicy::Mode::kNone;
    return policy;
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    Fail(ErrorCode::kInvalidArgument, "class weights must be balanced, none or w0,w1; got '" + text + "'");
  }
  try {
    std::size_t used0 = 0, used1 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    policy.manual = {std::stod(a, &used0), std::stod(b, &used1)};
    if (used0 != a.size() || used1 != b.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    Fail(ErrorCode::kInvalidArgument, "cannot parse class weights '" + text + "'");
  }
  policy.manual.Validate();
  policy.mode = WeightPolicy::Mode::kManual;
  return policy;
}

SplitIndices LoadSplit(const std::string& path, std::size_t n) {
  SplitIndices split;
  try {
    split = SplitIndices::FromJson(ReadJsonFile(path));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, path + ": " + e.what());
  }
  for (const auto* part : {&split.train, &split.valid, &split.test}) {
    for (auto i : *part) {
      if (i >= n) {
        Fail(ErrorCode::kValidation, path + ": index " + std::to_string(i) + " out of range for corpus of " +
                                         std::to_string(n) + " notes");
      }
    }
  }
  return split;
}

std::vector<std::size_t> AllIndices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::vector<std::size_t> TrainIndices(const Corpus& corpus, const char* split_path) {
  if (!split_path || !*split_path) return AllIndices(corpus.size());
  return LoadSplit(split_path, corpus.size()).train;
}

TrainRequest ToRequest(const ct_train_options& o) {
  TrainRequest r;
  r.feature = ParseFeatureKind(o.feature ? o.feature : "tfidf");
  r.classifier = ParseClassifierKind(o.classifier ? o.classifier : "logreg");
  if (o.params_json && *o.params_json) {
    try {
      r.params = ParamSetFromJson(nlohmann::json::parse(o.params_json));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, std::string("params: ") + e.what());
    }
  }
  r.weights = ParseWeights(Str(o.class_weights));
  r.preprocess = ToPreprocess(&o.preprocess);
  r.tfidf.max_features = o.max_features;
  r.tfidf.lemmatize = o.lemmatize != 0;
  r.seed = o.seed;
  return r;
}

std::optional<EmbeddingSet> MaybeEmbeddings(const char* path) {
  if (!path || !*path) return std::nullopt;
  return LoadEmbeddings(path);
}

}  // namespace

extern "C" {

const char* ct_version(void) { return "0.1.0"; }

const char* ct_last_error(void) { return g_last_error.c_str(); }

void ct_string_free(char* s) { std::free(s); }

void ct_synth_config_init(ct_synth_config* cfg) {
  if (!cfg) return;
  const SynthConfig d;
  *cfg = {d.n, d.prevalence, d.signal_strength, d.noise_rate, d.min_tokens, d.max_tokens, d.seed};
}

ct_status ct_corpus_synthesize(const ct_synth_config* cfg, ct_corpus** out) {
  return Guard([&] {
    Require(cfg, "cfg");
    Require(out, "out");
    SynthConfig c;
    c.n = cfg->n;
    c.prevalence = cfg->prevalence;
    c.signal_strength = cfg->signal_strength;
    c.noise_rate = cfg->noise_rate;
    c.min_tokens = cfg->min_tokens;
    c.max_tokens = cfg->max_tokens;
    c.seed = cfg->seed;
    *out = new ct_corpus{GenerateSynthetic(c)};
  });
}

ct_status ct_corpus_load(const char* path, ct_corpus** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new ct_corpus{LoadCorpus(path)};
  });
}

ct_status ct_corpus_save(const ct_corpus* corpus, const char* path) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(path, "path");
    SaveCorpus(corpus->corpus, path);
  });
}

size_t ct_corpus_size(const ct_corpus* corpus) { return corpus ? corpus->corpus.size() : 0; }

size_t ct_corpus_positives(const ct_corpus* corpus) { return corpus ? corpus->corpus.positives() : 0; }

ct_status ct_corpus_note(const ct_corpus* corpus, size_t index, const char** id, const char** text, int* label) {
  return Guard([&] {
    Require(corpus, "corpus");
    if (index >= corpus->corpus.size()) {
      Fail(ErrorCode::kInvalidArgument, "note index " + std::to_string(index) + " out of range");
    }
    const auto& note = corpus->corpus[index];
    if (id) *id = note.id.c_str();
    if (text) *text = note.text.c_str();
    if (label) *label = note.label;
  });
}

void ct_corpus_free(ct_corpus* corpus) { delete corpus; }

void ct_preprocess_options_init(ct_preprocess_options* opts) {
  if (!opts) return;
  *opts = {nullptr, nullptr, 1};
}

ct_status ct_preprocess_text(const ct_preprocess_options* opts, const char* raw, char** out) {
  return Guard([&] {
    Require(raw, "raw");
    Require(out, "out");
    *out = CopyString(PreprocessNote(raw, ToPreprocess(opts)));
  });
}

ct_status ct_corpus_preprocess(const ct_corpus* corpus, const ct_preprocess_options* opts, ct_corpus** out) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(out, "out");
    const auto cfg = ToPreprocess(opts);
    std::vector<Note> notes = corpus->corpus.notes();
    for (auto& note : notes) note.text = PreprocessNote(note.text, cfg);
    *out = new ct_corpus{Corpus(std::move(notes))};
  });
}

ct_status ct_split_write(const ct_corpus* corpus, uint64_t seed, const char* path) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(path, "path");
    SplitSpec spec;
    spec.seed = seed;
    const auto labels = corpus->corpus.labels();
    auto j = StratifiedSplit(labels, spec).ToJson();
    j["seed"] = seed;
    WriteTextFile(path, j.dump() + "\n");
  });
}

void ct_train_options_init(ct_train_options* opts) {
  if (!opts) return;
  const TfidfConfig t;
  opts->feature = "tfidf";
  opts->classifier = "logreg";
  opts->embeddings_path = nullptr;
  opts->split_path = nullptr;
  opts->params_json = nullptr;
  opts->class_weights = "balanced";
  ct_preprocess_options_init(&opts->preprocess);
  opts->max_features = t.max_features;
  opts->lemmatize = t.lemmatize ? 1 : 0;
  opts->seed = 42;
}

ct_status ct_tfidf_fit_write(const ct_corpus* corpus, const ct_train_options* opts, const char* out_path) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(opts, "opts");
    Require(out_path, "out_path");
    const auto request = ToRequest(*opts);
    const auto train = TrainIndices(corpus->corpus, opts->split_path);
    const auto tokens = PrepareTokens(corpus->corpus, request.preprocess, request.tfidf.lemmatize);
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (auto i : train) docs.push_back(tokens[i]);
    WriteTextFile(out_path, TfidfModel::Fit(docs, request.tfidf).ToJson().dump() + "\n");
  });
}

ct_status ct_embeddings_pool_write(const ct_corpus* corpus, const char* embeddings_path, const char* out_path) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(embeddings_path, "embeddings_path");
    Require(out_path, "out_path");
    const auto embeddings = LoadEmbeddings(embeddings_path);
    embeddings.RequireCoverage(corpus->corpus);
    std::string text;
    for (const auto& note : corpus->corpus.notes()) {
      text += nlohmann::json{{"note_id", note.id}, {"vector", embeddings.Pooled(note.id)}}.dump();
      text += '\n';
    }
    WriteTextFile(out_path, text);
  });
}

ct_status ct_model_train(const ct_corpus* corpus, const ct_train_options* opts, ct_model** out) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(opts, "opts");
    Require(out, "out");
    const auto request = ToRequest(*opts);
    const auto embeddings = MaybeEmbeddings(opts->embeddings_path);
    const auto train = TrainIndices(corpus->corpus, opts->split_path);
    if (embeddings) embeddings->RequireCoverage(corpus->corpus);
    *out = new ct_model{PipelineModel::Train(corpus->corpus, train, request, embeddings ? &*embeddings : nullptr)};
  });
}

ct_status ct_model_save(const ct_model* model, const char* path) {
  return Guard([&] {
    Require(model, "model");
    Require(path, "path");
    model->model.Save(path);
  });
}

ct_status ct_model_load(const char* path, ct_model** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new ct_model{PipelineModel::Load(path)};
  });
}

ct_status ct_model_predict_text(const ct_model* model, const char* raw, double* probability) {
  return Guard([&] {
    Require(model, "model");
    Require(raw, "raw");
    Require(probability, "probability");
    const auto& m = model->model;
    if (m.feature != FeatureKind::kTfidf) {
      Fail(ErrorCode::kInvalidArgument, "text prediction needs a tfidf model");
    }
    const Lemmatizer* lemmatizer = m.tfidf.config().lemmatize ? &Lemmatizer::Default() : nullptr;
    *probability = m.classifier.PredictProba(m.tfidf.Transform(Tokenize(PreprocessNote(raw, m.preprocess), lemmatizer)));
  });
}

void ct_model_free(ct_model* model) { delete model; }

void ct_tune_options_init(ct_tune_options* opts) {
  if (!opts) return;
  ct_train_options_init(&opts->train);
  opts->space_json = nullptr;
  opts->n_iter = 10;
  opts->folds = 5;
}

ct_status ct_tune(const ct_corpus* corpus, const ct_tune_options* opts, char** result_json) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(opts, "opts");
    Require(result_json, "result_json");
    const auto request = ToRequest(opts->train);
    ParamSpace space = ParamSpace::Default(request.classifier);
    if (opts->space_json && *opts->space_json) {
      try {
        space = ParamSpace::FromJson(nlohmann::json::parse(opts->space_json));
      } catch (const nlohmann::json::exception& e) {
        Fail(ErrorCode::kInvalidArgument, std::string("space: ") + e.what());
      }
    }
    const auto& c = corpus->corpus;
    const auto train = TrainIndices(c, opts->train.split_path);
    FeatureMatrix x;
    if (request.feature == FeatureKind::kTfidf) {
      const auto tokens = PrepareTokens(c, request.preprocess, request.tfidf.lemmatize);
      std::vector<std::vector<std::string>> docs;
      docs.reserve(train.size());
      for (auto i : train) docs.push_back(tokens[i]);
      x = TfidfModel::Fit(docs, request.tfidf).TransformAll(docs);
    } else {
      const auto embeddings = MaybeEmbeddings(opts->train.embeddings_path);
      if (!embeddings) Fail(ErrorCode::kValidation, "embedding features need an embeddings file");
      embeddings->RequireCoverage(c);
      x = EmbeddingFeatures(*embeddings, c, train);
    }
    const auto y = SelectLabels(c, train);
    const auto result =
        RandomizedSearch(request.classifier, space, opts->n_iter, x, y, request.weights, opts->folds, request.seed);
    nlohmann::json j = result.ToJson();
    j["classifier"] = ToString(request.classifier);
    j["feature"] = ToString(request.feature);
    j["seed"] = request.seed;
    j["space"] = space.ToJson();
    j["best_params"] = ParamSetToJson(result.best());
    *result_json = CopyString(j.dump(2) + "\n");
  });
}

ct_status ct_model_evaluate(const ct_model* model, const ct_corpus* corpus, const char* split_path,
                            const char* embeddings_path, int auto_threshold, double threshold,
                            char** report_json) {
  return Guard([&] {
    Require(model, "model");
    Require(corpus, "corpus");
    Require(report_json, "report_json");
    const auto& m = model->model;
    const auto& c = corpus->corpus;
    const auto embeddings = MaybeEmbeddings(embeddings_path);
    const EmbeddingSet* emb = embeddings ? &*embeddings : nullptr;
    if (emb) emb->RequireCoverage(c);

    std::vector<std::size_t> test;
    if (split_path && *split_path) {
      const auto split = LoadSplit(split_path, c.size());
      test = split.test;
      if (auto_threshold) {
        const auto scores = m.Score(c, split.valid, emb);
        threshold = OptimalThreshold(PrecisionRecallCurve(SelectLabels(c, split.valid), scores));
      }
    } else {
      if (auto_threshold) {
        Fail(ErrorCode::kInvalidArgument, "threshold auto needs a split with a validation partition");
      }
      test = AllIndices(c.size());
    }
    if (!std::isfinite(threshold)) Fail(ErrorCode::kInvalidArgument, "threshold must be finite");
    if (test.empty()) Fail(ErrorCode::kValidation, "nothing to evaluate: empty test partition");
    const auto scores = m.Score(c, test, emb);
    const auto report = EvaluateScores(SelectLabels(c, test), scores, threshold);
    *report_json = CopyString(report.ToJson().dump(2) + "\n");
  });
}

ct_status ct_bench_run(const char* config_path, const char* output_dir, const uint64_t* seeds, size_t n_seeds,
                       char** table_markdown) {
  return Guard([&] {
    Require(config_path, "config_path");
    auto cfg = BenchConfig::Load(config_path);
    if (output_dir && *output_dir) cfg.output_dir = output_dir;
    if (n_seeds > 0) {
      Require(seeds, "seeds");
      cfg.seeds.assign(seeds, seeds + n_seeds);
    }
    const auto result = RunBenchmark(cfg);
    WriteBenchOutputs(result, cfg.output_dir);
    if (table_markdown) *table_markdown = CopyString(RenderTable(result));
  });
}

}  // extern "C"
