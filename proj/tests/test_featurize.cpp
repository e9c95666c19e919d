// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "clintext/corpus.hpp"
#include "clintext/error.hpp"
#include "clintext/featurize.hpp"
#include "clintext/pipeline.hpp"
#include "clintext/preprocess.hpp"
#include "clintext/rng.hpp"
#include "doctest.h"

using namespace clintext;
using Docs = std::vector<std::vector<std::string>>;

namespace {

double WeightOf(const SparseVector& v, long index) {
  for (const auto& [i, w] : v.entries) {
    if (static_cast<long>(i) == index) return w;
  }
  return 0.0;
}

std::string Vector384(double fill, std::size_t n = 384) {
  std::string out = "[";
  for (std::size_t i = 0; i < n; ++i) out += (i ? "," : "") + std::to_string(fill);
  return out + "]";
}

}  // namespace

TEST_SUITE("featurize") {
  TEST_CASE("tokenize splits on spaces") {
    CHECK(Tokenize("pain controlled") == std::vector<std::string>{"pain", "controlled"});
    CHECK(Tokenize("").empty());
  }

  TEST_CASE("lemmatizer follows the documented suffix rules") {
    const auto& lem = Lemmatizer::Default();
    CHECK(lem.Lemma("ambulating") == "ambulate");
    CHECK(lem.Lemma("dropping") == "drop");
    CHECK(lem.Lemma("noted") == "note");
    CHECK(lem.Lemma("therapies") == "therapy");
    CHECK(lem.Lemma("boxes") == "box");
    CHECK(lem.Lemma("patients") == "patient");
    CHECK(lem.Lemma("dresses") == "dress");
    CHECK(lem.Lemma("status") == "status");
    CHECK(lem.Lemma("diagnosis") == "diagnosis");
    CHECK(lem.Lemma("pain") == "pain");
    CHECK(lem.Lemma("bed") == "bed");
    CHECK(lem.Lemma("ring") == "ring");
    CHECK(lem.Lemma("falling") == "fall");
    CHECK(lem.Lemma("controlled") == "control");
    CHECK(lem.Lemma("120") == "120");
    CHECK(lem.Lemma("is") == "be");
    const auto custom = Lemmatizer::Parse("# irregular\nwas be\n");
    CHECK(custom.Lemma("was") == "be");
    CHECK(Tokenize("patients ambulating", &lem) == std::vector<std::string>{"patient", "ambulate"});
  }

  TEST_CASE("n-grams join tokens with single spaces") {
    CHECK(NGrams({"a", "b", "c"}, 1, 2) == std::vector<std::string>{"a", "b", "c", "a b", "b c"});
    CHECK(NGrams({"a"}, 2, 2).empty());
  }

  TEST_CASE("two-document TF-IDF example") {
    const Docs docs = {{"pain", "controlled"}, {"pain", "free"}};
    const auto m = TfidfModel::Fit(docs);
    CHECK(m.terms() == std::vector<std::string>{"controlled", "free", "pain", "pain controlled", "pain free"});
    CHECK(m.Idf("pain") == doctest::Approx(1.0).epsilon(1e-12));
    const double idf_c = std::log(3.0 / 2.0) + 1.0;
    CHECK(std::abs(m.Idf("controlled") - idf_c) < 1e-12);
    CHECK(std::abs(m.Idf("controlled") - 1.4055) < 5e-5);

    const auto v = m.Transform({"pain", "controlled"});
    const double norm = std::sqrt(1.0 + 2.0 * idf_c * idf_c);
    CHECK(std::abs(WeightOf(v, m.Index("pain")) - 1.0 / norm) < 1e-9);
    CHECK(std::abs(WeightOf(v, m.Index("controlled")) - idf_c / norm) < 1e-9);
    CHECK(std::abs(WeightOf(v, m.Index("pain controlled")) - idf_c / norm) < 1e-9);
    CHECK(std::abs(WeightOf(v, m.Index("pain")) - 0.4495) < 1e-4);
    CHECK(std::abs(WeightOf(v, m.Index("controlled")) - 0.6317) < 5e-5);
    CHECK(v.size() == 3);
  }

  TEST_CASE("single document with one token") {
    const auto m = TfidfModel::Fit({{"x"}});
    CHECK(m.size() == 1);
    CHECK(m.Idf("x") == 1.0);
  }

  TEST_CASE("vocabulary cap keeps the lexicographically smallest among equal counts") {
    std::vector<std::string> words;
    for (int i = 0; i < 6000; ++i) words.push_back("w" + std::to_string(i));
    Docs docs;
    for (const auto& w : words) docs.push_back({w});
    const auto m = TfidfModel::Fit(docs);
    auto expected = words;
    std::sort(expected.begin(), expected.end());
    expected.resize(5000);
    CHECK(m.size() == 5000);
    CHECK(m.terms() == expected);
  }

  TEST_CASE("vocabulary cap ranks by total count") {
    TfidfConfig cfg;
    cfg.max_features = 2;
    cfg.ngram_max = 1;
    const auto m = TfidfModel::Fit({{"b", "b", "b"}, {"a", "c"}, {"c"}}, cfg);
    CHECK(m.terms() == std::vector<std::string>{"b", "c"});
  }

  TEST_CASE("fit is invariant under document order") {
    SynthConfig sc;
    sc.n = 120;
    const auto corpus = GenerateSynthetic(sc);
    auto docs = PrepareTokens(corpus, PreprocessConfig::Default(), true);
    const auto a = TfidfModel::Fit(docs);
    Rng rng(4);
    rng.Shuffle(std::span<std::vector<std::string>>(docs));
    const auto b = TfidfModel::Fit(docs);
    CHECK(a == b);
    CHECK(a.size() <= 5000);
  }

  TEST_CASE("transform rows have unit norm or are empty") {
    SynthConfig sc;
    sc.n = 80;
    const auto docs = PrepareTokens(GenerateSynthetic(sc), PreprocessConfig::Default(), true);
    const auto m = TfidfModel::Fit(docs);
    for (const auto& d : docs) CHECK(std::abs(m.Transform(d).Norm() - 1.0) < 1e-9);
    CHECK(m.Transform({"zzz", "qqq"}).empty());
    CHECK(m.Transform({}).empty());
  }

  TEST_CASE("repeating a single term keeps its direction") {
    const auto m = TfidfModel::Fit({{"pain", "controlled"}, {"pain", "free"}});
    CHECK(m.Transform({"pain", "pain"}) == m.Transform({"pain"}));
  }

  TEST_CASE("idf is non-increasing in document frequency") {
    const auto m = TfidfModel::Fit({{"a", "b", "c"}, {"a", "b"}, {"a"}, {"d"}});
    CHECK(m.Idf("a") < m.Idf("b"));
    CHECK(m.Idf("b") < m.Idf("c"));
    CHECK(m.Idf("c") == m.Idf("d"));
  }

  TEST_CASE("fitting nothing is an error") {
    CHECK_THROWS_AS(TfidfModel::Fit({}), Error);
    try {
      TfidfModel::Fit({{}, {}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("no terms") != std::string::npos);
    }
  }

  TEST_CASE("TF-IDF model JSON round trip") {
    const auto m = TfidfModel::Fit({{"pain", "controlled"}, {"pain", "free"}});
    const auto j = m.ToJson();
    CHECK(j.at("vocabulary").at("pain free") == 4);
    CHECK(j.at("idf").at("pain") == 1.0);
    const auto back = TfidfModel::FromJson(nlohmann::json::parse(j.dump()));
    CHECK(back == m);
    CHECK(back.Transform({"pain", "free"}) == m.Transform({"pain", "free"}));
  }

  TEST_CASE("embeddings file with one 384-d record") {
    const auto set = ParseEmbeddings("{\"dim\": 384, \"encoder\": \"minilm\"}\n{\"note_id\": \"n1\", \"vectors\": [" +
                                     Vector384(0.5) + "]}\n");
    CHECK(set.size() == 1);
    CHECK(set.dim() == 384);
    CHECK(set.encoder() == "minilm");
    CHECK(set.Pooled("n1")[383] == 0.5);
  }

  TEST_CASE("embedding dimension mismatch names the note") {
    try {
      ParseEmbeddings("{\"dim\": 384, \"encoder\": \"minilm\"}\n{\"note_id\": \"n7\", \"vectors\": [" +
                      Vector384(0.5, 383) + "]}\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kValidation);
      CHECK(std::string(e.what()).find("n7") != std::string::npos);
    }
  }

  TEST_CASE("duplicate embedding ids are rejected") {
    CHECK_THROWS_AS(ParseEmbeddings("{\"dim\": 2, \"encoder\": \"e\"}\n"
                                    "{\"note_id\": \"a\", \"vectors\": [[1, 2]]}\n"
                                    "{\"note_id\": \"a\", \"vectors\": [[1, 2]]}\n"),
                    Error);
  }

  TEST_CASE("embedding reader accepts scientific notation and covers the corpus") {
    const auto set = ParseEmbeddings("{\"dim\": 2, \"encoder\": \"e\"}\n"
                                     "{\"note_id\": \"a\", \"vectors\": [[1e-3, 2.5E2], [3e-3, -2.5e2]]}\n");
    const auto v = set.Pooled("a");
    CHECK(v[0] == doctest::Approx(2e-3));
    CHECK(v[1] == doctest::Approx(0.0));
    const Corpus ok({{"a", "x", 0}});
    CHECK_NOTHROW(set.RequireCoverage(ok));
    const Corpus missing({{"a", "x", 0}, {"b", "y", 1}});
    try {
      set.RequireCoverage(missing);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("missing note_id b") != std::string::npos);
    }
    CHECK(ParseEmbeddings(SerializeEmbeddings(set)).Pooled("a") == v);
  }

  TEST_CASE("mean pooling") {
    CHECK(MeanPool({{1, 3}}) == std::vector<double>{1, 3});
    CHECK(MeanPool({{1, 3}, {3, 5}}) == std::vector<double>{2, 4});
    CHECK_THROWS_AS(MeanPool({}), Error);
    CHECK_THROWS_AS(MeanPool({{1}, {1, 2}}), Error);

    Rng rng(21);
    for (int t = 0; t < 50; ++t) {
      std::vector<std::vector<double>> vs(1 + rng.UniformInt(8), std::vector<double>(5));
      for (auto& v : vs) {
        for (auto& x : v) x = rng.UniformReal() * 2 - 1;
      }
      const auto a = MeanPool(vs);
      rng.Shuffle(std::span<std::vector<double>>(vs));
      const auto b = MeanPool(vs);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
  }
}
