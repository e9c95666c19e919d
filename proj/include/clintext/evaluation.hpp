// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace clintext {

struct SplitSpec {
  std::array<double, 3> ratios{0.64, 0.16, 0.20};
  std::uint64_t seed = 42;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;

  nlohmann::json ToJson() const;
  static SplitIndices FromJson(const nlohmann::json& j);
};

// Per-class largest-remainder allocation of n_c into (train, valid, test).
// Quotas are computed in exact integer arithmetic on ratios rounded to parts
// per million; leftover units go to the largest remainders, ties to the
// earlier part.
std::array<std::size_t, 3> AllocateCounts(std::size_t n, const std::array<double, 3>& ratios);

// Stratified three-way split. Each class's indices are shuffled with a stream
// derived from the seed and the class label, then cut by AllocateCounts.
// Returned index lists are ascending.
SplitIndices StratifiedSplit(std::span<const int> labels, const SplitSpec& spec);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified k-fold. Class 0 then class 1 indices (each shuffled) are dealt
// round-robin to folds with one running counter, so per-class fold sizes
// differ by at most one and total fold sizes stay balanced.
std::vector<Fold> StratifiedKFold(std::span<const int> labels, std::size_t k, std::uint64_t seed);

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// One point per distinct score t, predicting positive when score >= t,
// ordered by ascending threshold.
using PRCurve = std::vector<PRPoint>;

PRCurve PrecisionRecallCurve(std::span<const int> y_true, std::span<const double> scores);

// Threshold of the maximum-F1 point; ties resolve to the smallest threshold.
// F1 values are compared exactly as the rationals 2TP / (2TP + FP + FN).
double OptimalThreshold(const PRCurve& curve);

// Mann-Whitney AUC: positive-negative pairs score 1 when the positive is
// higher and 1/2 on ties.
double RocAuc(std::span<const int> y_true, std::span<const double> scores);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  std::array<ClassMetrics, 2> per_class;
  double auc_roc = 0.0;
  double threshold = 0.5;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t n() const { return tp + fp + tn + fn; }

  // Field names follow the report table columns: "Accuracy",
  // "Precision"/"Recall"/"F1-Score" keyed by class "0"/"1", "AUC-ROC",
  // plus "threshold" and "confusion".
  nlohmann::json ToJson() const;
  static EvalReport FromJson(const nlohmann::json& j);
};

// Zero denominators give 0. AUC needs both classes in y_true; otherwise it is
// reported as 0.5.
EvalReport ClassificationReport(std::span<const int> y_true, std::span<const int> y_pred,
                                std::span<const double> scores, double threshold = 0.5);

// Thresholds scores (score >= threshold) and reports.
EvalReport EvaluateScores(std::span<const int> y_true, std::span<const double> scores, double threshold);

// Class-1 F1 of score >= threshold predictions.
double PositiveF1(std::span<const int> y_true, std::span<const double> scores, double threshold);

}  // namespace clintext
