// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "clintext/clintext.h"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using nlohmann::json;
using clintext::testing::ReadFile;
using clintext::testing::ScratchDir;
using clintext::testing::WriteFile;

namespace {

std::string Take(char* s) {
  std::string out = s ? s : "";
  ct_string_free(s);
  return out;
}

ct_corpus* Synth(std::size_t n, std::uint64_t seed) {
  ct_synth_config cfg;
  ct_synth_config_init(&cfg);
  cfg.n = n;
  cfg.seed = seed;
  ct_corpus* c = nullptr;
  REQUIRE(ct_corpus_synthesize(&cfg, &c) == CT_OK);
  return c;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version and defaults") {
    CHECK(std::strlen(ct_version()) > 0);
    ct_synth_config cfg;
    ct_synth_config_init(&cfg);
    CHECK(cfg.n == 2000);
    CHECK(cfg.prevalence == 0.18);
    CHECK(cfg.seed == 42);
    ct_tune_options tune;
    ct_tune_options_init(&tune);
    CHECK(tune.n_iter == 10);
    CHECK(tune.folds == 5);
    CHECK(std::string(tune.train.classifier) == "logreg");
  }

  TEST_CASE("corpus handles") {
    ScratchDir dir("capi_corpus");
    ct_corpus* c = Synth(100, 42);
    CHECK(ct_corpus_size(c) == 100);
    CHECK(ct_corpus_positives(c) == 18);
    const char* id = nullptr;
    const char* text = nullptr;
    int label = -1;
    REQUIRE(ct_corpus_note(c, 0, &id, &text, &label) == CT_OK);
    CHECK(std::string(id) == "note-00001");
    CHECK((label == 0 || label == 1));
    CHECK(ct_corpus_note(c, 100, &id, &text, &label) == CT_INVALID_ARGUMENT);

    const auto path = (dir / "c.jsonl").string();
    REQUIRE(ct_corpus_save(c, path.c_str()) == CT_OK);
    ct_corpus* back = nullptr;
    REQUIRE(ct_corpus_load(path.c_str(), &back) == CT_OK);
    CHECK(ct_corpus_size(back) == 100);
    ct_corpus_free(back);
    ct_corpus_free(c);
    ct_corpus_free(nullptr);

    ct_corpus* none = nullptr;
    CHECK(ct_corpus_load((dir / "absent.jsonl").string().c_str(), &none) == CT_IO_ERROR);
    CHECK(none == nullptr);
    CHECK(std::string(ct_last_error()).find("absent.jsonl") != std::string::npos);
    WriteFile(dir / "bad.jsonl", "{\"note_id\": \"a\", \"text\": \"x\", \"label\": 2}\n");
    CHECK(ct_corpus_load((dir / "bad.jsonl").string().c_str(), &none) == CT_VALIDATION_ERROR);
    WriteFile(dir / "broken.jsonl", "{\"id\": \n");
    CHECK(ct_corpus_load((dir / "broken.jsonl").string().c_str(), &none) == CT_PARSE_ERROR);
    CHECK(ct_corpus_load(nullptr, &none) == CT_INVALID_ARGUMENT);

    ct_synth_config bad;
    ct_synth_config_init(&bad);
    bad.prevalence = 1.5;
    CHECK(ct_corpus_synthesize(&bad, &none) == CT_INVALID_ARGUMENT);
  }

  TEST_CASE("preprocessing") {
    ct_preprocess_options opts;
    ct_preprocess_options_init(&opts);
    char* out = nullptr;
    REQUIRE(ct_preprocess_text(&opts, "Pt ambulating, D/C home.", &out) == CT_OK);
    const std::string cleaned = Take(out);
    CHECK(cleaned.find("patient") != std::string::npos);
    CHECK(cleaned.find("home") == std::string::npos);
    opts.apply_mask = 0;
    REQUIRE(ct_preprocess_text(&opts, "D/C home.", &out) == CT_OK);
    CHECK(Take(out).find("home") != std::string::npos);
    opts.abbreviations_path = "/nonexistent/abbr.json";
    CHECK(ct_preprocess_text(&opts, "x", &out) == CT_IO_ERROR);

    ct_corpus* c = Synth(20, 1);
    ct_preprocess_options_init(&opts);
    ct_corpus* p = nullptr;
    REQUIRE(ct_corpus_preprocess(c, &opts, &p) == CT_OK);
    CHECK(ct_corpus_size(p) == 20);
    const char *id = nullptr, *text = nullptr;
    int label = 0;
    ct_corpus_note(p, 3, &id, &text, &label);
    for (const char* q = text; *q; ++q) CHECK(!(*q >= 'A' && *q <= 'Z'));
    ct_corpus_free(p);
    ct_corpus_free(c);
  }

  TEST_CASE("split, train, save, load, predict and evaluate") {
    ScratchDir dir("capi_model");
    ct_corpus* c = Synth(400, 42);
    const auto split = (dir / "split.json").string();
    REQUIRE(ct_split_write(c, 42, split.c_str()) == CT_OK);
    const auto sj = json::parse(ReadFile(split));
    CHECK(sj["train"].size() + sj["valid"].size() + sj["test"].size() == 400);

    ct_train_options opts;
    ct_train_options_init(&opts);
    opts.split_path = split.c_str();
    opts.params_json = "{\"lambda\": 0.01}";
    ct_model* m = nullptr;
    REQUIRE(ct_model_train(c, &opts, &m) == CT_OK);
    const auto model_path = (dir / "m.json").string();
    REQUIRE(ct_model_save(m, model_path.c_str()) == CT_OK);
    ct_model* loaded = nullptr;
    REQUIRE(ct_model_load(model_path.c_str(), &loaded) == CT_OK);

    double p1 = 0, p2 = 0;
    const char* note = "Patient ambulating independently, pain controlled on oral medications.";
    REQUIRE(ct_model_predict_text(m, note, &p1) == CT_OK);
    REQUIRE(ct_model_predict_text(loaded, note, &p2) == CT_OK);
    CHECK(p1 == p2);
    CHECK(p1 > 0.0);
    CHECK(p1 < 1.0);

    char* report = nullptr;
    REQUIRE(ct_model_evaluate(loaded, c, split.c_str(), nullptr, 1, 0.0, &report) == CT_OK);
    const auto auto_report = json::parse(Take(report));
    CHECK(auto_report["AUC-ROC"].get<double>() > 0.8);
    REQUIRE(ct_model_evaluate(loaded, c, split.c_str(), nullptr, 0, 0.5, &report) == CT_OK);
    const auto fixed = json::parse(Take(report));
    CHECK(fixed["threshold"].get<double>() == 0.5);
    CHECK(fixed["AUC-ROC"] == auto_report["AUC-ROC"]);
    CHECK(ct_model_evaluate(loaded, c, nullptr, nullptr, 1, 0.0, &report) == CT_INVALID_ARGUMENT);
    REQUIRE(ct_model_evaluate(loaded, c, nullptr, nullptr, 0, 0.5, &report) == CT_OK);
    const auto whole = json::parse(Take(report));
    const auto& conf = whole["confusion"];
    CHECK(conf["TP"].get<int>() + conf["FP"].get<int>() + conf["TN"].get<int>() + conf["FN"].get<int>() == 400);

    opts.classifier = "forest";
    ct_model* none = nullptr;
    CHECK(ct_model_train(c, &opts, &none) == CT_INVALID_ARGUMENT);
    opts.classifier = "logreg";
    opts.params_json = "{\"lambda\": ";
    CHECK(ct_model_train(c, &opts, &none) == CT_INVALID_ARGUMENT);
    opts.params_json = nullptr;
    opts.class_weights = "1,x";
    CHECK(ct_model_train(c, &opts, &none) == CT_INVALID_ARGUMENT);
    CHECK(none == nullptr);

    ct_model_free(loaded);
    ct_model_free(m);
    ct_corpus_free(c);
  }

  TEST_CASE("featurize outputs") {
    ScratchDir dir("capi_featurize");
    ct_corpus* c = Synth(120, 5);
    ct_train_options opts;
    ct_train_options_init(&opts);
    opts.max_features = 50;
    const auto tfidf = (dir / "tfidf.json").string();
    REQUIRE(ct_tfidf_fit_write(c, &opts, tfidf.c_str()) == CT_OK);
    const auto tj = json::parse(ReadFile(tfidf));
    CHECK(tj["vocabulary"].size() == 50);

    std::string vecs = "{\"dim\": 3, \"encoder\": \"random\"}\n";
    for (std::size_t i = 0; i < ct_corpus_size(c); ++i) {
      const char *id = nullptr, *text = nullptr;
      int label = 0;
      ct_corpus_note(c, i, &id, &text, &label);
      vecs += "{\"note_id\": \"" + std::string(id) + "\", \"vectors\": [[1, 2, 3], [3, 2, " + std::to_string(i) + "]]}\n";
    }
    WriteFile(dir / "vecs.jsonl", vecs);
    const auto pooled = (dir / "pooled.jsonl").string();
    REQUIRE(ct_embeddings_pool_write(c, (dir / "vecs.jsonl").string().c_str(), pooled.c_str()) == CT_OK);
    std::istringstream lines(ReadFile(pooled));
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    const auto second = json::parse(line);
    CHECK(second["vector"] == json::array({2.0, 2.0, 2.0}));

    WriteFile(dir / "short.jsonl", "{\"dim\": 3, \"encoder\": \"random\"}\n");
    CHECK(ct_embeddings_pool_write(c, (dir / "short.jsonl").string().c_str(), pooled.c_str()) ==
          CT_VALIDATION_ERROR);

    opts.feature = "embedding";
    opts.embeddings_path = nullptr;
    ct_model* none = nullptr;
    CHECK(ct_model_train(c, &opts, &none) != CT_OK);
    ct_corpus_free(c);
  }

  TEST_CASE("tuning returns the candidate table") {
    ct_corpus* c = Synth(200, 8);
    ct_tune_options opts;
    ct_tune_options_init(&opts);
    opts.n_iter = 2;
    opts.folds = 3;
    char* out = nullptr;
    REQUIRE(ct_tune(c, &opts, &out) == CT_OK);
    const auto j = json::parse(Take(out));
    CHECK(j["candidates"].size() == 2);
    CHECK(j.contains("best_params"));
    CHECK(j["best_params"].contains("lambda"));
    opts.space_json = "{\"lambda\": {\"choice\": [0.5]}}";
    opts.n_iter = 1;
    REQUIRE(ct_tune(c, &opts, &out) == CT_OK);
    CHECK(json::parse(Take(out))["best_params"]["lambda"] == 0.5);
    opts.n_iter = 0;
    CHECK(ct_tune(c, &opts, &out) == CT_INVALID_ARGUMENT);
    ct_corpus_free(c);
  }

  TEST_CASE("benchmark run writes its outputs") {
    ScratchDir dir("capi_bench");
    WriteFile(dir / "cfg.json", R"({"synthetic": {"n": 200}, "cv_folds": 3,
      "models": [{"name": "LR", "feature": "tfidf", "classifier": "logreg", "params": {"lambda": 0.01}}]})");
    const std::uint64_t seeds[] = {7, 8};
    char* table = nullptr;
    const auto out = (dir / "out").string();
    REQUIRE(ct_bench_run((dir / "cfg.json").string().c_str(), out.c_str(), seeds, 2, &table) == CT_OK);
    const auto t = Take(table);
    CHECK(t.rfind("| Model | Accuracy |", 0) == 0);
    CHECK(ReadFile(dir / "out" / "table.md") == t);
    const auto r = json::parse(ReadFile(dir / "out" / "results.json"));
    CHECK(r["models"][0]["seeds"].size() == 2);
    CHECK(r["models"][0]["seeds"][1]["seed"] == 8);
    CHECK(ct_bench_run((dir / "missing.json").string().c_str(), out.c_str(), nullptr, 0, &table) == CT_IO_ERROR);
  }
}
