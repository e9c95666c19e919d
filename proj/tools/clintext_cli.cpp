// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

// Command-line front end. Talks to the library only through clintext.h.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "clintext/clintext.h"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Failure {
  int exit_code;
  std::string message;
};

void Check(ct_status status, const std::string& context) {
  if (status == CT_OK) return;
  const int code = status == CT_INVALID_ARGUMENT ? kExitUsage : kExitData;
  throw Failure{code, context + ": " + ct_last_error()};
}

// Owns a string returned by the library.
class OwnedString {
 public:
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  ~OwnedString() { ct_string_free(ptr_); }
  char** out() { return &ptr_; }
  std::string str() const { return ptr_ ? ptr_ : ""; }

 private:
  char* ptr_ = nullptr;
};

class CorpusHandle {
 public:
  CorpusHandle() = default;
  CorpusHandle(const CorpusHandle&) = delete;
  CorpusHandle& operator=(const CorpusHandle&) = delete;
  CorpusHandle(CorpusHandle&& other) noexcept : ptr_(std::exchange(other.ptr_, nullptr)) {}
  ~CorpusHandle() { ct_corpus_free(ptr_); }
  ct_corpus** out() { return &ptr_; }
  const ct_corpus* get() const { return ptr_; }

 private:
  ct_corpus* ptr_ = nullptr;
};

class ModelHandle {
 public:
  ModelHandle() = default;
  ModelHandle(const ModelHandle&) = delete;
  ModelHandle& operator=(const ModelHandle&) = delete;
  ~ModelHandle() { ct_model_free(ptr_); }
  ct_model** out() { return &ptr_; }
  const ct_model* get() const { return ptr_; }

 private:
  ct_model* ptr_ = nullptr;
};

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void Emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{kExitData, "cannot write " + out_path};
  out << text;
  if (!out) throw Failure{kExitData, "write failed: " + out_path};
}

struct PreprocessFlags {
  std::string abbreviations;
  std::string mask_terms;
  bool no_mask = false;

  void Add(CLI::App* cmd) {
    cmd->add_option("--abbreviations", abbreviations, "Abbreviation map (JSON object)");
    cmd->add_option("--mask-terms", mask_terms, "Masked term list (one per line)");
    cmd->add_flag("--no-mask", no_mask, "Keep discharge-related terms");
  }
  ct_preprocess_options Options() const {
    ct_preprocess_options o;
    ct_preprocess_options_init(&o);
    o.abbreviations_path = OrNull(abbreviations);
    o.mask_terms_path = OrNull(mask_terms);
    o.apply_mask = no_mask ? 0 : 1;
    return o;
  }
};

struct TrainFlags {
  std::string corpus;
  std::string split;
  std::string feature = "tfidf";
  std::string classifier = "logreg";
  std::string embeddings;
  std::string params;
  std::string class_weights = "balanced";
  std::size_t max_features = 5000;
  bool no_lemmatize = false;
  std::uint64_t seed = 42;
  PreprocessFlags preprocess;

  void Add(CLI::App* cmd, bool with_classifier) {
    cmd->add_option("--corpus", corpus, "Corpus JSONL")->required();
    cmd->add_option("--split", split, "Split JSON; training uses its train partition");
    cmd->add_option("--feature", feature, "tfidf | embedding")->check(CLI::IsMember({"tfidf", "embedding"}));
    cmd->add_option("--embeddings", embeddings, "Embeddings JSONL (embedding features)");
    cmd->add_option("--max-features", max_features, "TF-IDF vocabulary cap");
    cmd->add_flag("--no-lemmatize", no_lemmatize, "Skip lemmatization");
    cmd->add_option("--seed", seed, "Random seed");
    preprocess.Add(cmd);
    if (!with_classifier) return;
    cmd->add_option("--classifier", classifier, "logreg | gbdt")->check(CLI::IsMember({"logreg", "gbdt"}));
    cmd->add_option("--class-weights", class_weights, "balanced | none | w0,w1");
  }
  // The returned struct points into this object and pp.
  ct_train_options Options(ct_preprocess_options& pp) const {
    ct_train_options o;
    ct_train_options_init(&o);
    o.feature = feature.c_str();
    o.classifier = classifier.c_str();
    o.embeddings_path = OrNull(embeddings);
    o.split_path = OrNull(split);
    o.params_json = OrNull(params);
    o.class_weights = class_weights.c_str();
    pp = preprocess.Options();
    o.preprocess = pp;
    o.max_features = max_features;
    o.lemmatize = no_lemmatize ? 0 : 1;
    o.seed = seed;
    return o;
  }
};

CorpusHandle LoadCorpusOrFail(const std::string& path) {
  CorpusHandle corpus;
  Check(ct_corpus_load(path.c_str(), corpus.out()), "load " + path);
  return corpus;
}

// Turns a JSON object of option defaults into argv-style tokens, so command
// line flags that follow override them.
std::vector<std::string> ConfigArgs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot open config " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Failure{kExitData, "config " + path + ": " + e.what()};
  }
  if (!j.is_object()) throw Failure{kExitData, "config " + path + ": expected a JSON object"};
  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
  return args;
}

// Splices `--config FILE` contents in front of the remaining flags of the
// subcommand. bench keeps --config as its own option.
std::vector<std::string> ExpandConfig(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "bench") return args;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    auto extra = ConfigArgs(path);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    break;
  }
  return args;
}

int Run(int argc, char** argv) {
  CLI::App app{"clintext: clinical note classification toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(ct_version()));
  const std::string config_help = "JSON object of option defaults for this subcommand";

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  ct_synth_config sc;
  ct_synth_config_init(&sc);
  std::string synth_out;
  std::string unused_config;
  synth->add_option("--n", sc.n, "Number of notes");
  synth->add_option("--prevalence", sc.prevalence, "Fraction of label-1 notes")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--signal", sc.signal_strength, "Probability of label-matching cues")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--noise", sc.noise_rate, "Probability of one opposite cue")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--min-tokens", sc.min_tokens, "Minimum filler tokens per note");
  synth->add_option("--max-tokens", sc.max_tokens, "Maximum filler tokens per note");
  synth->add_option("--seed", sc.seed, "Random seed");
  synth->add_option("--out", synth_out, "Output corpus JSONL")->required();
  synth->add_option("--config", unused_config, config_help);

  // preprocess
  auto* prep = app.add_subcommand("preprocess", "Normalize, expand, clean and mask note text");
  std::string prep_corpus, prep_text, prep_out;
  std::uint64_t unused_seed = 0;
  PreprocessFlags prep_flags;
  auto* prep_corpus_opt = prep->add_option("--corpus", prep_corpus, "Corpus JSONL");
  prep->add_option("--text", prep_text, "Preprocess one string instead")->excludes(prep_corpus_opt);
  prep->add_option("--out", prep_out, "Output path (default: stdout)");
  prep->add_option("--seed", unused_seed, "Accepted for uniformity; preprocessing is deterministic");
  prep->add_option("--config", unused_config, config_help);
  prep_flags.Add(prep);

  // split
  auto* split = app.add_subcommand("split", "Stratified 64/16/20 train/valid/test split");
  std::string split_corpus, split_out;
  std::uint64_t split_seed = 42;
  split->add_option("--corpus", split_corpus, "Corpus JSONL")->required();
  split->add_option("--seed", split_seed, "Random seed");
  split->add_option("--out", split_out, "Output split JSON")->required();
  split->add_option("--config", unused_config, config_help);

  // featurize
  auto* feat = app.add_subcommand("featurize", "Fit TF-IDF on the train partition or pool embeddings");
  TrainFlags feat_flags;
  std::string feat_out;
  feat_flags.Add(feat, false);
  feat->add_option("--out", feat_out, "Output path")->required();
  feat->add_option("--config", unused_config, config_help);

  // train
  auto* train = app.add_subcommand("train", "Train a classifier and save the model");
  TrainFlags train_flags;
  std::string train_out;
  train_flags.Add(train, true);
  train->add_option("--params", train_flags.params, "Hyperparameters as a JSON object");
  train->add_option("--out", train_out, "Output model JSON")->required();
  train->add_option("--config", unused_config, config_help);

  // tune
  auto* tune = app.add_subcommand("tune", "Randomized hyperparameter search with stratified k-fold CV");
  TrainFlags tune_flags;
  std::string tune_out, tune_space;
  std::size_t n_iter = 10, folds = 5;
  tune_flags.Add(tune, true);
  tune->add_option("--space", tune_space, "Search space as a JSON object");
  tune->add_option("--n-iter", n_iter, "Number of sampled candidates")->check(CLI::PositiveNumber);
  tune->add_option("--folds", folds, "Cross-validation folds")->check(CLI::Range(2, 100));
  tune->add_option("--out", tune_out, "Output JSON (default: stdout)");
  tune->add_option("--config", unused_config, config_help);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on the test partition");
  std::string eval_model, eval_corpus, eval_split, eval_embeddings, eval_out, threshold_text = "auto";
  eval->add_option("--model", eval_model, "Model JSON")->required();
  eval->add_option("--corpus", eval_corpus, "Corpus JSONL")->required();
  eval->add_option("--split", eval_split, "Split JSON (test is scored; valid picks the auto threshold)");
  eval->add_option("--embeddings", eval_embeddings, "Embeddings JSONL for embedding models");
  eval->add_option("--threshold", threshold_text, "auto | <float>");
  eval->add_option("--out", eval_out, "Report JSON (default: stdout)");
  eval->add_option("--seed", unused_seed, "Accepted for uniformity; evaluation is deterministic");
  eval->add_option("--config", unused_config, config_help);

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark grid; writes table.md and results.json");
  std::string bench_config, bench_out;
  std::vector<std::uint64_t> bench_seeds;
  bench->add_option("--config", bench_config, "Benchmark config JSON")->required();
  bench->add_option("--out", bench_out, "Output directory (overrides the config)");
  bench->add_option("--seed", bench_seeds, "Seeds (repeatable; overrides the config)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::vector<std::string> args;
  try {
    args = ExpandConfig(argc, argv);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cerr, std::cerr);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      CorpusHandle corpus;
      Check(ct_corpus_synthesize(&sc, corpus.out()), "synth");
      Check(ct_corpus_save(corpus.get(), synth_out.c_str()), "synth");
      std::cerr << "wrote " << ct_corpus_size(corpus.get()) << " notes (" << ct_corpus_positives(corpus.get())
                << " positive) to " << synth_out << "\n";
    } else if (*prep) {
      const auto opts = prep_flags.Options();
      if (!prep_text.empty() || prep_corpus.empty()) {
        if (prep_text.empty()) throw Failure{kExitUsage, "preprocess: give --corpus or --text"};
        OwnedString out;
        Check(ct_preprocess_text(&opts, prep_text.c_str(), out.out()), "preprocess");
        Emit(out.str() + "\n", prep_out);
      } else {
        auto corpus = LoadCorpusOrFail(prep_corpus);
        CorpusHandle processed;
        Check(ct_corpus_preprocess(corpus.get(), &opts, processed.out()), "preprocess");
        if (prep_out.empty()) throw Failure{kExitUsage, "preprocess: --corpus needs --out"};
        Check(ct_corpus_save(processed.get(), prep_out.c_str()), "preprocess");
      }
    } else if (*split) {
      auto corpus = LoadCorpusOrFail(split_corpus);
      Check(ct_split_write(corpus.get(), split_seed, split_out.c_str()), "split");
    } else if (*feat) {
      auto corpus = LoadCorpusOrFail(feat_flags.corpus);
      if (feat_flags.feature == "embedding") {
        if (feat_flags.embeddings.empty()) throw Failure{kExitUsage, "featurize: embedding features need --embeddings"};
        Check(ct_embeddings_pool_write(corpus.get(), feat_flags.embeddings.c_str(), feat_out.c_str()), "featurize");
      } else {
        ct_preprocess_options pp;
        const auto opts = feat_flags.Options(pp);
        Check(ct_tfidf_fit_write(corpus.get(), &opts, feat_out.c_str()), "featurize");
      }
    } else if (*train) {
      auto corpus = LoadCorpusOrFail(train_flags.corpus);
      ct_preprocess_options pp;
      const auto opts = train_flags.Options(pp);
      ModelHandle model;
      Check(ct_model_train(corpus.get(), &opts, model.out()), "train");
      Check(ct_model_save(model.get(), train_out.c_str()), "train");
    } else if (*tune) {
      auto corpus = LoadCorpusOrFail(tune_flags.corpus);
      ct_tune_options opts;
      ct_tune_options_init(&opts);
      ct_preprocess_options pp;
      opts.train = tune_flags.Options(pp);
      opts.space_json = OrNull(tune_space);
      opts.n_iter = n_iter;
      opts.folds = folds;
      OwnedString result;
      Check(ct_tune(corpus.get(), &opts, result.out()), "tune");
      Emit(result.str(), tune_out);
    } else if (*eval) {
      int auto_threshold = 0;
      double threshold = 0.5;
      if (threshold_text == "auto") {
        auto_threshold = 1;
      } else {
        std::size_t used = 0;
        try {
          threshold = std::stod(threshold_text, &used);
        } catch (const std::logic_error&) {
          used = 0;
        }
        if (used == 0 || used != threshold_text.size()) {
          throw Failure{kExitUsage, "--threshold must be 'auto' or a number, got '" + threshold_text + "'"};
        }
      }
      ModelHandle model;
      Check(ct_model_load(eval_model.c_str(), model.out()), "load " + eval_model);
      auto corpus = LoadCorpusOrFail(eval_corpus);
      OwnedString report;
      Check(ct_model_evaluate(model.get(), corpus.get(), OrNull(eval_split), OrNull(eval_embeddings), auto_threshold,
                              threshold, report.out()),
            "eval");
      Emit(report.str(), eval_out);
    } else if (*bench) {
      OwnedString table;
      Check(ct_bench_run(bench_config.c_str(), OrNull(bench_out), bench_seeds.data(), bench_seeds.size(),
                         table.out()),
            "bench");
      std::cout << table.str();
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
