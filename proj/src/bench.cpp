// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/bench.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <memory>

#include "clintext/error.hpp"

namespace clintext {

using nlohmann::json;

namespace {

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

ModelSpec ParseModel(const json& j, const std::filesystem::path& base) {
  ModelSpec m;
  m.name = j.at("name").get<std::string>();
  m.feature = ParseFeatureKind(j.value("feature", std::string("tfidf")));
  m.classifier = ParseClassifierKind(j.at("classifier").get<std::string>());
  if (j.contains("embeddings")) m.embeddings = Resolve(base, j.at("embeddings").get<std::string>());
  if (j.contains("class_weights")) m.weights = WeightPolicy::FromJson(j.at("class_weights"));
  if (j.contains("params")) m.params = ParamSetFromJson(j.at("params"));
  m.space = ParamSpace::Default(m.classifier);
  if (j.contains("search")) {
    const auto& s = j.at("search");
    m.n_iter = s.value("n_iter", std::size_t{10});
    if (s.contains("space")) m.space = ParamSpace::FromJson(s.at("space"));
  }
  return m;
}

}  // namespace

void BenchConfig::Validate() const {
  if (seeds.empty()) Fail(ErrorCode::kValidation, "bench config: seeds must be nonempty");
  if (models.empty()) Fail(ErrorCode::kValidation, "bench config: no models");
  if (corpus_path.empty() && !synthetic) Fail(ErrorCode::kValidation, "bench config: need corpus or synthetic");
  if (cv_folds < 2) Fail(ErrorCode::kValidation, "bench config: cv_folds must be >= 2");
  for (const auto& m : models) {
    if (m.feature == FeatureKind::kEmbedding && m.embeddings.empty()) {
      Fail(ErrorCode::kValidation, "bench config: model '" + m.name + "' uses embeddings but names no vectors file");
    }
    if (!m.params && (m.space.empty() || m.n_iter == 0)) {
      Fail(ErrorCode::kValidation, "bench config: model '" + m.name + "' has neither params nor a search");
    }
  }
}

BenchConfig BenchConfig::FromJson(const json& j, const std::filesystem::path& base_dir) {
  BenchConfig cfg;
  try {
    if (j.contains("corpus")) cfg.corpus_path = Resolve(base_dir, j.at("corpus").get<std::string>());
    if (j.contains("synthetic")) {
      const auto& s = j.at("synthetic");
      SynthConfig sc;
      sc.n = s.value("n", sc.n);
      sc.prevalence = s.value("prevalence", sc.prevalence);
      sc.signal_strength = s.value("signal_strength", sc.signal_strength);
      sc.noise_rate = s.value("noise_rate", sc.noise_rate);
      sc.min_tokens = s.value("min_tokens", sc.min_tokens);
      sc.max_tokens = s.value("max_tokens", sc.max_tokens);
      sc.seed = s.value("seed", sc.seed);
      cfg.synthetic = sc;
    }
    if (j.contains("preprocess")) {
      const auto& p = j.at("preprocess");
      if (p.contains("abbreviations")) cfg.abbreviations = Resolve(base_dir, p.at("abbreviations").get<std::string>());
      if (p.contains("mask_terms")) cfg.mask_terms = Resolve(base_dir, p.at("mask_terms").get<std::string>());
      cfg.apply_mask = p.value("apply_mask", true);
    }
    if (j.contains("tfidf")) {
      const auto& t = j.at("tfidf");
      cfg.tfidf.max_features = t.value("max_features", cfg.tfidf.max_features);
      cfg.tfidf.lemmatize = t.value("lemmatize", cfg.tfidf.lemmatize);
    }
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.cv_folds = j.value("cv_folds", cfg.cv_folds);
    for (const auto& m : j.at("models")) cfg.models.push_back(ParseModel(m, base_dir));
    if (j.contains("output_dir")) cfg.output_dir = Resolve(base_dir, j.at("output_dir").get<std::string>());
    else cfg.output_dir = Resolve(base_dir, "bench_out");
  } catch (const json::exception& e) {
    Fail(ErrorCode::kValidation, std::string("bench config: ") + e.what());
  } catch (const Error& e) {
    Fail(ErrorCode::kValidation, std::string("bench config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

BenchConfig BenchConfig::Load(const std::filesystem::path& path) {
  return FromJson(ReadJsonFile(path), path.parent_path());
}

MetricSummary MetricSummary::From(const EvalReport& r) {
  return MetricSummary{r.accuracy, r.per_class, r.auc_roc, r.threshold};
}

MetricSummary MetricSummary::Mean(const std::vector<EvalReport>& reports) {
  MetricSummary m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.accuracy += r.accuracy;
    m.auc_roc += r.auc_roc;
    m.threshold += r.threshold;
    for (std::size_t c = 0; c < 2; ++c) {
      m.per_class[c].precision += r.per_class[c].precision;
      m.per_class[c].recall += r.per_class[c].recall;
      m.per_class[c].f1 += r.per_class[c].f1;
    }
  }
  const double n = static_cast<double>(reports.size());
  m.accuracy /= n;
  m.auc_roc /= n;
  m.threshold /= n;
  for (auto& c : m.per_class) {
    c.precision /= n;
    c.recall /= n;
    c.f1 /= n;
  }
  return m;
}

json MetricSummary::ToJson() const {
  return {{"Accuracy", accuracy},
          {"Precision", {{"0", per_class[0].precision}, {"1", per_class[1].precision}}},
          {"Recall", {{"0", per_class[0].recall}, {"1", per_class[1].recall}}},
          {"F1-Score", {{"0", per_class[0].f1}, {"1", per_class[1].f1}}},
          {"AUC-ROC", auc_roc},
          {"threshold", threshold}};
}

json BenchResult::ToJson() const {
  json models = json::array();
  for (const auto& row : rows) {
    json seeds = json::array();
    for (const auto& c : row.cells) {
      json cell = {{"seed", c.seed}, {"params", ParamSetToJson(c.params)}, {"report", c.report.ToJson()}};
      if (c.search) {
        cell["cv_mean_f1"] = c.search->candidates[c.search->best_index].mean_f1;
        cell["cv_candidates"] = c.search->candidates.size();
      }
      cell["split_sizes"] = {c.split.train.size(), c.split.valid.size(), c.split.test.size()};
      seeds.push_back(std::move(cell));
    }
    models.push_back({{"name", row.name},
                      {"feature", ToString(row.feature)},
                      {"classifier", ToString(row.classifier)},
                      {"mean", row.mean.ToJson()},
                      {"seeds", seeds}});
  }
  return {{"models", models}};
}

PreparedCorpus PreparedCorpus::Make(Corpus corpus, const PreprocessConfig& preprocess, const TfidfConfig& tfidf) {
  PreparedCorpus p;
  p.tokens = PrepareTokens(corpus, preprocess, tfidf.lemmatize);
  p.corpus = std::move(corpus);
  return p;
}

PreprocessConfig ResolvePreprocess(const BenchConfig& cfg) {
  return PreprocessConfig::FromFiles(cfg.abbreviations, cfg.mask_terms, cfg.apply_mask);
}

CellResult RunCell(const PreparedCorpus& data, const ModelSpec& spec, const TfidfConfig& tfidf,
                   std::size_t cv_folds, std::uint64_t seed, const EmbeddingSet* embeddings) {
  const auto& corpus = data.corpus;
  CellResult cell;
  cell.seed = seed;
  const auto labels = corpus.labels();
  cell.split = StratifiedSplit(labels, SplitSpec{{0.64, 0.16, 0.20}, seed});
  const auto& split = cell.split;

  FeatureMatrix x_train, x_valid, x_test;
  if (spec.feature == FeatureKind::kTfidf) {
    auto select = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::vector<std::string>> docs;
      docs.reserve(idx.size());
      for (auto i : idx) docs.push_back(data.tokens.at(i));
      return docs;
    };
    const auto train_docs = select(split.train);
    cell.tfidf = TfidfModel::Fit(train_docs, tfidf);
    x_train = cell.tfidf.TransformAll(train_docs);
    x_valid = cell.tfidf.TransformAll(select(split.valid));
    x_test = cell.tfidf.TransformAll(select(split.test));
  } else {
    if (!embeddings) Fail(ErrorCode::kValidation, "model '" + spec.name + "' needs embeddings");
    x_train = EmbeddingFeatures(*embeddings, corpus, split.train);
    x_valid = EmbeddingFeatures(*embeddings, corpus, split.valid);
    x_test = EmbeddingFeatures(*embeddings, corpus, split.test);
  }
  const auto y_train = SelectLabels(corpus, split.train);
  const auto y_valid = SelectLabels(corpus, split.valid);
  const auto y_test = SelectLabels(corpus, split.test);

  if (spec.params) {
    cell.params = *spec.params;
  } else {
    cell.search = RandomizedSearch(spec.classifier, spec.space, spec.n_iter, x_train, y_train, spec.weights,
                                   cv_folds, seed);
    cell.params = cell.search->best();
  }
  const auto model = TrainClassifier(spec.classifier, cell.params, x_train, y_train, spec.weights, seed);

  const auto valid_scores = model.PredictAll(x_valid);
  bool valid_has_both = false;
  for (int y : y_valid) valid_has_both |= y != y_valid.front();
  cell.threshold = valid_has_both ? OptimalThreshold(PrecisionRecallCurve(y_valid, valid_scores)) : 0.5;

  cell.report = EvaluateScores(y_test, model.PredictAll(x_test), cell.threshold);
  return cell;
}

BenchResult RunBenchmark(const BenchConfig& cfg, const PreparedCorpus& data) {
  cfg.Validate();
  std::map<std::filesystem::path, std::unique_ptr<EmbeddingSet>> embeddings;
  for (const auto& m : cfg.models) {
    if (m.feature != FeatureKind::kEmbedding || embeddings.count(m.embeddings)) continue;
    auto set = std::make_unique<EmbeddingSet>(LoadEmbeddings(m.embeddings));
    set->RequireCoverage(data.corpus);
    embeddings.emplace(m.embeddings, std::move(set));
  }

  BenchResult result;
  for (const auto& m : cfg.models) {
    ModelRow row{m.name, m.feature, m.classifier, {}, {}};
    const EmbeddingSet* emb = m.feature == FeatureKind::kEmbedding ? embeddings.at(m.embeddings).get() : nullptr;
    std::vector<EvalReport> reports;
    for (auto seed : cfg.seeds) {
      row.cells.push_back(RunCell(data, m, cfg.tfidf, cfg.cv_folds, seed, emb));
      reports.push_back(row.cells.back().report);
    }
    row.mean = MetricSummary::Mean(reports);
    result.rows.push_back(std::move(row));
  }
  return result;
}

BenchResult RunBenchmark(const BenchConfig& cfg) {
  cfg.Validate();
  Corpus corpus = cfg.synthetic ? GenerateSynthetic(*cfg.synthetic) : LoadCorpus(cfg.corpus_path);
  if (corpus.empty()) Fail(ErrorCode::kValidation, "bench: corpus is empty");
  const auto data = PreparedCorpus::Make(std::move(corpus), ResolvePreprocess(cfg), cfg.tfidf);
  return RunBenchmark(cfg, data);
}

std::string FormatHalfUp(double value, int decimals) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::abs(value), std::chars_format::fixed);
  std::string s(buf, res.ptr);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    s += '.';
    dot = s.size() - 1;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t int_len = dot;
  const std::size_t keep = int_len + static_cast<std::size_t>(decimals);
  if (digits.size() < keep) digits.append(keep - digits.size(), '0');
  const bool round_up = digits.size() > keep && digits[keep] >= '5';
  digits.resize(keep);
  if (round_up) {
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
      if (i == 0) {
        digits.insert(digits.begin(), '1');
        break;
      }
    }
  }
  const std::size_t new_int_len = digits.size() - static_cast<std::size_t>(decimals);
  std::string out = digits.substr(0, new_int_len);
  if (decimals > 0) out += "." + digits.substr(new_int_len);
  const bool zero = out.find_first_not_of("0.") == std::string::npos;
  if (value < 0 && !zero) out.insert(out.begin(), '-');
  return out;
}

std::string RenderTable(const BenchResult& result) {
  std::string out =
      "| Model | Accuracy | Precision (0) | Precision (1) | Recall (0) | Recall (1) | F1-Score (0) | F1-Score (1) "
      "| AUC-ROC |\n"
      "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& row : result.rows) {
    const auto& m = row.mean;
    const double cols[] = {m.accuracy,          m.per_class[0].precision, m.per_class[1].precision,
                           m.per_class[0].recall, m.per_class[1].recall,  m.per_class[0].f1,
                           m.per_class[1].f1,     m.auc_roc};
    out += "| " + row.name;
    for (double v : cols) out += " | " + FormatHalfUp(v, 2);
    out += " |\n";
  }
  return out;
}

void WriteBenchOutputs(const BenchResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  WriteTextFile(dir / "table.md", RenderTable(result));
  WriteTextFile(dir / "results.json", result.ToJson().dump(2) + "\n");
}

}  // namespace clintext
