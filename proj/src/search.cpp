// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/search.hpp"

#include <cmath>

#include "clintext/error.hpp"
#include "clintext/evaluation.hpp"
#include "clintext/rng.hpp"

namespace clintext {

namespace {

bool IsIntegral(double v) { return std::isfinite(v) && std::floor(v) == v; }

int AsInt(const std::string& name, double v) {
  if (!IsIntegral(v)) Fail(ErrorCode::kInvalidArgument, "parameter " + name + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

nlohmann::json ParamSetToJson(const ParamSet& params) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : params) {
    if (IsIntegral(v) && std::abs(v) < 1e15) j[k] = static_cast<std::int64_t>(v);
    else j[k] = v;
  }
  return j;
}

ParamSet ParamSetFromJson(const nlohmann::json& j) {
  if (!j.is_object()) Fail(ErrorCode::kParse, "parameters must be a JSON object");
  ParamSet out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) Fail(ErrorCode::kParse, "parameter " + k + " must be numeric");
    out[k] = v.get<double>();
  }
  return out;
}

double ParamDist::Sample(Rng& rng) const {
  switch (kind) {
    case Kind::kLogUniform: {
      const double a = std::log(lo), b = std::log(hi);
      return std::exp(a + rng.UniformReal() * (b - a));
    }
    case Kind::kUniformInt:
      return static_cast<double>(
          rng.UniformRange(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
    case Kind::kChoice:
      return choices[rng.UniformInt(choices.size())];
  }
  return 0.0;
}

ParamSet ParamSpace::Sample(Rng& rng) const {
  ParamSet out;
  for (const auto& d : dists) out[d.name] = d.Sample(rng);
  return out;
}

ParamSpace ParamSpace::Default(ClassifierKind kind) {
  using K = ParamDist::Kind;
  ParamSpace s;
  if (kind == ClassifierKind::kLogReg) {
    s.dists.push_back({"lambda", K::kLogUniform, 1e-4, 10.0, {}});
  } else {
    s.dists.push_back({"n_trees", K::kUniformInt, 100, 500, {}});
    s.dists.push_back({"learning_rate", K::kLogUniform, 0.01, 0.3, {}});
    s.dists.push_back({"max_depth", K::kUniformInt, 3, 10, {}});
    s.dists.push_back({"min_child_hessian", K::kChoice, 0, 0, {1.0, 5.0, 10.0}});
    s.dists.push_back({"l2", K::kChoice, 0, 0, {0.5, 1.0, 2.0}});
  }
  return s;
}

nlohmann::json ParamSpace::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& d : dists) {
    switch (d.kind) {
      case ParamDist::Kind::kLogUniform: j[d.name] = {{"log_uniform", {d.lo, d.hi}}}; break;
      case ParamDist::Kind::kUniformInt:
        j[d.name] = {{"int", {static_cast<std::int64_t>(d.lo), static_cast<std::int64_t>(d.hi)}}};
        break;
      case ParamDist::Kind::kChoice: j[d.name] = {{"choice", d.choices}}; break;
    }
  }
  return j;
}

ParamSpace ParamSpace::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) Fail(ErrorCode::kParse, "search space must be a JSON object");
  ParamSpace s;
  for (const auto& [name, spec] : j.items()) {
    if (!spec.is_object() || spec.size() != 1) {
      Fail(ErrorCode::kParse, "search space entry " + name + " must have exactly one distribution");
    }
    ParamDist d;
    d.name = name;
    try {
      if (spec.contains("log_uniform")) {
        d.kind = ParamDist::Kind::kLogUniform;
        d.lo = spec["log_uniform"].at(0).get<double>();
        d.hi = spec["log_uniform"].at(1).get<double>();
        if (!(d.lo > 0.0 && d.hi >= d.lo)) Fail(ErrorCode::kParse, name + ": log_uniform needs 0 < lo <= hi");
      } else if (spec.contains("int")) {
        d.kind = ParamDist::Kind::kUniformInt;
        d.lo = static_cast<double>(spec["int"].at(0).get<std::int64_t>());
        d.hi = static_cast<double>(spec["int"].at(1).get<std::int64_t>());
        if (d.hi < d.lo) Fail(ErrorCode::kParse, name + ": int range needs lo <= hi");
      } else if (spec.contains("choice")) {
        d.kind = ParamDist::Kind::kChoice;
        d.choices = spec["choice"].get<std::vector<double>>();
        if (d.choices.empty()) Fail(ErrorCode::kParse, name + ": empty choice list");
      } else {
        Fail(ErrorCode::kParse, name + ": unknown distribution (log_uniform, int, choice)");
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kParse, "search space entry " + name + ": " + e.what());
    }
    s.dists.push_back(std::move(d));
  }
  return s;
}

ClassWeights WeightPolicy::Resolve(std::span<const int> labels) const {
  switch (mode) {
    case Mode::kBalanced: return ComputeClassWeights(labels);
    case Mode::kNone: return ClassWeights{};
    case Mode::kManual: manual.Validate(); return manual;
  }
  return ClassWeights{};
}

nlohmann::json WeightPolicy::ToJson() const {
  switch (mode) {
    case Mode::kBalanced: return "balanced";
    case Mode::kNone: return "none";
    case Mode::kManual: return {manual.w0, manual.w1};
  }
  return "balanced";
}

WeightPolicy WeightPolicy::FromJson(const nlohmann::json& j) {
  WeightPolicy p;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "balanced") return p;
    if (s == "none") {
      p.mode = Mode::kNone;
      return p;
    }
    Fail(ErrorCode::kParse, "class weights must be \"balanced\", \"none\" or [w0, w1]");
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    p.mode = Mode::kManual;
    p.manual = {j[0].get<double>(), j[1].get<double>()};
    p.manual.Validate();
    return p;
  }
  Fail(ErrorCode::kParse, "class weights must be \"balanced\", \"none\" or [w0, w1]");
}

Classifier TrainClassifier(ClassifierKind kind, const ParamSet& params, const FeatureMatrix& x,
                           std::span<const int> y, const WeightPolicy& weights, std::uint64_t seed) {
  const auto cw = weights.Resolve(y);
  if (kind == ClassifierKind::kLogReg) {
    LogRegParams p;
    for (const auto& [k, v] : params) {
      if (k == "lambda") p.lambda = v;
      else if (k == "max_iter") p.max_iter = AsInt(k, v);
      else if (k == "tol") p.tol = v;
      else Fail(ErrorCode::kInvalidArgument, "unknown logreg parameter '" + k + "'");
    }
    return Classifier(TrainLogReg(x, y, cw, p, seed));
  }
  GbdtParams p;
  for (const auto& [k, v] : params) {
    if (k == "n_trees") p.n_trees = AsInt(k, v);
    else if (k == "learning_rate") p.learning_rate = v;
    else if (k == "max_depth") p.max_depth = AsInt(k, v);
    else if (k == "min_child_hessian") p.min_child_hessian = v;
    else if (k == "l2") p.l2 = v;
    else if (k == "min_gain") p.min_gain = v;
    else Fail(ErrorCode::kInvalidArgument, "unknown gbdt parameter '" + k + "'");
  }
  const auto s = cw.PerSample(y);
  return Classifier(TrainGbdt(x, y, s, p, seed));
}

nlohmann::json SearchResult::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : candidates) {
    rows.push_back({{"params", ParamSetToJson(c.params)}, {"fold_f1", c.fold_f1}, {"mean_f1", c.mean_f1}});
  }
  return {{"best_index", best_index},
          {"best_params", candidates.empty() ? nlohmann::json::object() : ParamSetToJson(best())},
          {"candidates", rows}};
}

SearchResult EvaluateCandidates(ClassifierKind kind, const std::vector<ParamSet>& candidates,
                                const FeatureMatrix& x, std::span<const int> y, const WeightPolicy& weights,
                                std::size_t k, std::uint64_t seed) {
  if (candidates.empty()) Fail(ErrorCode::kInvalidArgument, "search: no candidates");
  const auto folds = StratifiedKFold(y, k, seed);
  std::vector<FeatureMatrix> fold_train, fold_test;
  std::vector<std::vector<int>> y_train, y_test;
  for (const auto& f : folds) {
    fold_train.push_back(x.Subset(f.train));
    fold_test.push_back(x.Subset(f.test));
    auto& a = y_train.emplace_back();
    for (auto i : f.train) a.push_back(y[i]);
    auto& b = y_test.emplace_back();
    for (auto i : f.test) b.push_back(y[i]);
  }

  SearchResult result;
  for (const auto& params : candidates) {
    CandidateResult cand{params, {}, 0.0};
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto model = TrainClassifier(kind, params, fold_train[f], y_train[f], weights, seed);
      const auto scores = model.PredictAll(fold_test[f]);
      cand.fold_f1.push_back(PositiveF1(y_test[f], scores, 0.5));
    }
    double sum = 0.0;
    for (double v : cand.fold_f1) sum += v;
    cand.mean_f1 = sum / static_cast<double>(cand.fold_f1.size());
    if (result.candidates.empty() || cand.mean_f1 > result.candidates[result.best_index].mean_f1) {
      result.best_index = result.candidates.size();
    }
    result.candidates.push_back(std::move(cand));
  }
  return result;
}

SearchResult RandomizedSearch(ClassifierKind kind, const ParamSpace& space, std::size_t n_iter,
                              const FeatureMatrix& x, std::span<const int> y, const WeightPolicy& weights,
                              std::size_t k, std::uint64_t seed) {
  if (space.empty()) Fail(ErrorCode::kInvalidArgument, "search: empty parameter space");
  if (n_iter == 0) Fail(ErrorCode::kInvalidArgument, "search: n_iter must be >= 1");
  Rng rng = Rng(seed).Split("search");
  std::vector<ParamSet> candidates;
  for (std::size_t i = 0; i < n_iter; ++i) candidates.push_back(space.Sample(rng));
  return EvaluateCandidates(kind, candidates, x, y, weights, k, seed);
}

}  // namespace clintext
