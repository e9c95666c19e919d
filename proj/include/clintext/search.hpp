// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "clintext/featurize.hpp"
#include "clintext/models.hpp"
#include "json.hpp"

namespace clintext {

class Rng;

// Hyperparameter values by name. Integer parameters are stored as whole
// doubles.
using ParamSet = std::map<std::string, double>;

nlohmann::json ParamSetToJson(const ParamSet& params);
ParamSet ParamSetFromJson(const nlohmann::json& j);

struct ParamDist {
  enum class Kind { kLogUniform, kUniformInt, kChoice };

  std::string name;
  Kind kind = Kind::kChoice;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> choices;

  double Sample(Rng& rng) const;
};

// Declared distributions, sampled in list order. Spaces read from JSON are
// listed in key order.
//
// JSON form: {"lambda": {"log_uniform": [1e-4, 10]},
//             "n_trees": {"int": [100, 500]},
//             "l2": {"choice": [0.5, 1, 2]}}
struct ParamSpace {
  std::vector<ParamDist> dists;

  bool empty() const { return dists.empty(); }
  ParamSet Sample(Rng& rng) const;

  static ParamSpace Default(ClassifierKind kind);
  nlohmann::json ToJson() const;
  static ParamSpace FromJson(const nlohmann::json& j);
};

// How per-sample loss weights are derived from the training labels.
struct WeightPolicy {
  enum class Mode { kBalanced, kNone, kManual };

  Mode mode = Mode::kBalanced;
  ClassWeights manual;

  ClassWeights Resolve(std::span<const int> labels) const;

  // "balanced", "none", or [w0, w1].
  nlohmann::json ToJson() const;
  static WeightPolicy FromJson(const nlohmann::json& j);
};

// Trains one classifier. Unknown parameter names throw. LogReg reads
// lambda, max_iter, tol; GBDT reads n_trees, learning_rate, max_depth,
// min_child_hessian, l2, min_gain. Missing names keep their defaults.
Classifier TrainClassifier(ClassifierKind kind, const ParamSet& params, const FeatureMatrix& x,
                           std::span<const int> y, const WeightPolicy& weights, std::uint64_t seed);

struct CandidateResult {
  ParamSet params;
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
};

struct SearchResult {
  std::size_t best_index = 0;
  std::vector<CandidateResult> candidates;

  const ParamSet& best() const { return candidates.at(best_index).params; }
  nlohmann::json ToJson() const;
};

// Scores each candidate by mean class-1 F1 (threshold 0.5) over stratified
// k-fold CV on (x, y). The first candidate with the highest mean wins.
SearchResult EvaluateCandidates(ClassifierKind kind, const std::vector<ParamSet>& candidates,
                                const FeatureMatrix& x, std::span<const int> y, const WeightPolicy& weights,
                                std::size_t k, std::uint64_t seed);

// Samples n_iter candidates from the space, then EvaluateCandidates.
SearchResult RandomizedSearch(ClassifierKind kind, const ParamSpace& space, std::size_t n_iter,
                              const FeatureMatrix& x, std::span<const int> y, const WeightPolicy& weights,
                              std::size_t k, std::uint64_t seed);

}  // namespace clintext
