// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <cmath>
#include <vector>

#include "clintext/bench.hpp"
#include "clintext/error.hpp"
#include "clintext/evaluation.hpp"
#include "clintext/pipeline.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace clintext;

namespace {

double TestAuc(const Corpus& corpus, std::uint64_t seed) {
  const auto split = StratifiedSplit(corpus.labels(), SplitSpec{{0.64, 0.16, 0.20}, seed});
  TrainRequest req;
  req.params = {{"lambda", 0.01}};
  const auto model = PipelineModel::Train(corpus, split.train, req);
  return RocAuc(SelectLabels(corpus, split.test), model.Score(corpus, split.test));
}

Corpus WithTexts(const Corpus& corpus, const std::vector<std::size_t>& indices, const std::string& text) {
  auto notes = corpus.notes();
  for (auto i : indices) notes[i].text = text + " " + notes[i].id;
  return Corpus(std::move(notes));
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("without signal a bag-of-words model is near chance") {
    // 10000 notes keep the test-split AUC standard error near 0.016.
    SynthConfig cfg;
    cfg.n = 10000;
    cfg.signal_strength = 0.0;
    for (double noise : {0.0, 0.1}) {
      cfg.noise_rate = noise;
      const double auc = TestAuc(GenerateSynthetic(cfg), 42);
      MESSAGE("noise " << noise << " test AUC " << auc);
      CHECK(auc >= 0.45);
      CHECK(auc <= 0.55);
    }
  }

  TEST_CASE("noise-only cues are anti-correlated with the label") {
    // With signal 0 a positive note holds one negative cue with probability r
    // and a negative note one positive cue with probability r. The score
    // (positive cues - negative cues) is then -1 or 0 for positives and 0 or
    // +1 for negatives, so only the (0, 0) ties count: AUC = (1 - r)^2 / 2.
    SynthConfig cfg;
    cfg.n = 10000;
    cfg.signal_strength = 0.0;
    cfg.noise_rate = 0.1;
    const double r = cfg.noise_rate;
    const auto corpus = GenerateSynthetic(cfg);
    std::vector<double> score;
    for (const auto& note : corpus.notes()) {
      const auto cc = CountCues(note.text);
      score.push_back(cc.positive - cc.negative);
    }
    CHECK(std::abs(RocAuc(corpus.labels(), score) - 0.5 * (1 - r) * (1 - r)) < 0.02);
  }

  TEST_CASE("model persistence preserves scores") {
    SynthConfig cfg;
    cfg.n = 300;
    const auto corpus = GenerateSynthetic(cfg);
    const auto split = StratifiedSplit(corpus.labels(), SplitSpec{});
    testing::ScratchDir dir("pipeline_persist");
    for (auto kind : {ClassifierKind::kLogReg, ClassifierKind::kGbdt}) {
      TrainRequest req;
      req.classifier = kind;
      if (kind == ClassifierKind::kGbdt) req.params = {{"n_trees", 20}, {"max_depth", 3}};
      const auto model = PipelineModel::Train(corpus, split.train, req);
      model.Save(dir / "m.json");
      const auto back = PipelineModel::Load(dir / "m.json");
      CHECK(back.Score(corpus, split.test) == model.Score(corpus, split.test));
      CHECK(back.ToJson() == model.ToJson());
    }
    CHECK_THROWS_AS(PipelineModel::Load(dir / "absent.json"), Error);
    testing::WriteFile(dir / "bad.json", "{\"kind\": ");
    try {
      PipelineModel::Load(dir / "bad.json");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
    }
  }

  TEST_CASE("embedding features are mean-pooled random vectors") {
    SynthConfig cfg;
    cfg.n = 120;
    const auto corpus = GenerateSynthetic(cfg);
    const auto emb = testing::RandomEmbeddings(corpus, 16, 5);
    const auto back = ParseEmbeddings(SerializeEmbeddings(emb));
    const std::vector<std::size_t> idx = {0, 7, 9};
    const auto x = EmbeddingFeatures(back, corpus, idx);
    REQUIRE(x.size() == 3);
    CHECK(x.cols == 16);
    const auto pooled = MeanPool(emb.Find(corpus[7].id)->vectors);
    for (const auto& [j, v] : x.rows[1].entries) CHECK(std::abs(v - pooled[j]) < 1e-12);

    const auto split = StratifiedSplit(corpus.labels(), SplitSpec{});
    TrainRequest req;
    req.feature = FeatureKind::kEmbedding;
    const auto model = PipelineModel::Train(corpus, split.train, req, &emb);
    CHECK(model.embedding_dim == 16);
    CHECK(model.Score(corpus, split.test, &emb).size() == split.test.size());
    CHECK_THROWS_AS(model.Score(corpus, split.test), Error);
    const auto other = testing::RandomEmbeddings(corpus, 8, 5);
    CHECK_THROWS_AS(model.Score(corpus, split.test, &other), Error);
  }

  TEST_CASE("test-partition texts never reach the fitted model or the threshold") {
    SynthConfig cfg;
    cfg.n = 400;
    const auto corpus = GenerateSynthetic(cfg);
    const auto pre = PreprocessConfig::Default();
    const TfidfConfig tfidf;
    ModelSpec spec;
    spec.name = "lr";
    spec.space = ParamSpace::Default(ClassifierKind::kLogReg);
    spec.n_iter = 2;
    const auto base = PreparedCorpus::Make(corpus, pre, tfidf);
    const auto cell = RunCell(base, spec, tfidf, 3, 42, nullptr);

    const auto perturbed = PreparedCorpus::Make(
        WithTexts(corpus, cell.split.test, "discharge home tomorrow pain controlled"), pre, tfidf);
    const auto other = RunCell(perturbed, spec, tfidf, 3, 42, nullptr);
    CHECK(other.tfidf.ToJson() == cell.tfidf.ToJson());
    CHECK(other.threshold == cell.threshold);
    CHECK(ParamSetToJson(other.params) == ParamSetToJson(cell.params));

    // The same perturbation on validation texts does move the fitted pieces
    // that depend on them.
    const auto on_valid = PreparedCorpus::Make(WithTexts(corpus, cell.split.valid, "zzz"), pre, tfidf);
    const auto moved = RunCell(on_valid, spec, tfidf, 3, 42, nullptr);
    CHECK(moved.tfidf.ToJson() == cell.tfidf.ToJson());
    CHECK(moved.threshold != cell.threshold);
  }
}
