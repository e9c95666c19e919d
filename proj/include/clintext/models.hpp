// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "clintext/featurize.hpp"
#include "json.hpp"

namespace clintext {

// Predicted probabilities are clamped to [kProbFloor, 1 - kProbFloor].
inline constexpr double kProbFloor = 1e-12;

double Sigmoid(double z);
double ClampProbability(double p);

// Per-class loss multipliers. w0 applies to label 0, w1 to label 1.
struct ClassWeights {
  double w0 = 1.0;
  double w1 = 1.0;

  double operator()(int label) const { return label == 1 ? w1 : w0; }
  // Throws Error(kInvalidArgument) unless both are finite and > 0.
  void Validate() const;
  std::vector<double> PerSample(std::span<const int> labels) const;

  friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
};

// "Balanced" weights w_c = N / (2 N_c). Throws when a class is absent.
ClassWeights ComputeClassWeights(std::span<const int> labels);

// ---------------------------------------------------------------------------
// Logistic regression

struct LogRegParams {
  double lambda = 1e-2;
  int max_iter = 1000;
  double tol = 1e-6;
};

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;

  double Margin(const SparseVector& x) const;
  double PredictProba(const SparseVector& x) const;
  double PredictProba(std::span<const double> dense) const;

  nlohmann::json ToJson() const;
  static LogRegModel FromJson(const nlohmann::json& j);
};

// Class-weighted, L2-penalized mean log-loss
//   L(w, b) = (1 / sum s_i) sum s_i [softplus(z_i) - y_i z_i] + lambda/2 |w|^2
// with z_i = w.x_i + b and the bias left unpenalized.
class LogRegObjective {
 public:
  LogRegObjective(const FeatureMatrix& x, std::span<const int> y, std::vector<double> sample_weights,
                  double lambda);

  double Value(std::span<const double> w, double b) const;
  // Returns the loss and fills the gradient.
  double Gradient(std::span<const double> w, double b, std::vector<double>& grad_w, double& grad_b) const;

  std::size_t dim() const { return x_.cols; }

 private:
  const FeatureMatrix& x_;
  std::span<const int> y_;
  std::vector<double> s_;
  double total_weight_ = 0.0;
  double lambda_;
};

struct LogRegTrace {
  // Loss after each accepted step; element 0 is the starting loss.
  std::vector<double> losses;
  // Parameters after each accepted step, bias last. Only filled when
  // record_iterates is set.
  std::vector<std::vector<double>> iterates;
  bool record_iterates = false;
  int iterations = 0;
  bool converged = false;
};

// Full-batch gradient descent with Armijo backtracking from w = 0, b = 0.
// Stops when the gradient's max-norm falls below tol or after max_iter steps.
// The seed is accepted for interface symmetry; training is deterministic.
LogRegModel TrainLogReg(const FeatureMatrix& x, std::span<const int> y, const ClassWeights& weights,
                        const LogRegParams& params, std::uint64_t seed = 0, LogRegTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Gradient-boosted trees

struct GbdtParams {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  double min_child_hessian = 1.0;
  double l2 = 1.0;
  double min_gain = 0.0;
};

// Internal nodes send x[feature] <= threshold left. Leaves carry the raw
// Newton step; the ensemble scales it by the learning rate.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;

  double Predict(const SparseVector& x) const;
  int Depth() const;
  nlohmann::json ToJson() const;
  static Tree FromJson(const nlohmann::json& j);
};

struct GbdtModel {
  GbdtParams params;
  double base_score = 0.0;
  std::size_t num_features = 0;
  std::vector<Tree> trees;

  double Margin(const SparseVector& x) const;
  double PredictProba(const SparseVector& x) const;

  nlohmann::json ToJson() const;
  static GbdtModel FromJson(const nlohmann::json& j);
};

// Newton boosting on the weighted logistic loss. Each tree is grown level by
// level with an exact scan over every distinct feature value (absent sparse
// entries count as 0). A split needs gain > 0 and min_child_hessian on both
// sides; equal gains go to the lower feature index, then the lower threshold.
// The seed is accepted for interface symmetry; training is deterministic.
GbdtModel TrainGbdt(const FeatureMatrix& x, std::span<const int> y, std::span<const double> sample_weights,
                    const GbdtParams& params, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------

enum class ClassifierKind { kLogReg, kGbdt };

std::string ToString(ClassifierKind kind);
ClassifierKind ParseClassifierKind(const std::string& name);

// A trained predictor of either kind.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(LogRegModel m) : model_(std::move(m)) {}
  explicit Classifier(GbdtModel m) : model_(std::move(m)) {}

  ClassifierKind kind() const;
  double PredictProba(const SparseVector& x) const;
  std::vector<double> PredictAll(const FeatureMatrix& x) const;

  const LogRegModel* logreg() const { return std::get_if<LogRegModel>(&model_); }
  const GbdtModel* gbdt() const { return std::get_if<GbdtModel>(&model_); }

  // {"kind": "logreg" | "gbdt", ...}
  nlohmann::json ToJson() const;
  static Classifier FromJson(const nlohmann::json& j);

 private:
  std::variant<LogRegModel, GbdtModel> model_;
};

}  // namespace clintext
