// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clintext/error.hpp"
#include "clintext/rng.hpp"

namespace clintext {

namespace {

constexpr std::int64_t kPpm = 1000000;

void CheckBinary(std::span<const int> y) {
  for (int v : y) {
    if (v != 0 && v != 1) Fail(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
}

void CheckScores(std::span<const int> y, std::span<const double> s) {
  if (y.size() != s.size()) Fail(ErrorCode::kInvalidArgument, "labels and scores differ in length");
  CheckBinary(y);
  for (double v : s) {
    if (std::isnan(v)) Fail(ErrorCode::kInvalidArgument, "NaN score");
  }
}

std::pair<std::size_t, std::size_t> ClassCounts(std::span<const int> y) {
  std::size_t pos = 0;
  for (int v : y) pos += v == 1 ? 1 : 0;
  return {y.size() - pos, pos};
}

void RequireBothClasses(std::span<const int> y, const char* what) {
  const auto [neg, pos] = ClassCounts(y);
  if (neg == 0 || pos == 0) Fail(ErrorCode::kInvalidArgument, std::string(what) + ": y_true has a single class");
}

double SafeDiv(double a, double b) { return b > 0 ? a / b : 0.0; }

double F1(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

nlohmann::json SplitIndices::ToJson() const {
  return {{"train", train}, {"valid", valid}, {"test", test}};
}

SplitIndices SplitIndices::FromJson(const nlohmann::json& j) {
  try {
    SplitIndices s;
    s.train = j.at("train").get<std::vector<std::size_t>>();
    s.valid = j.at("valid").get<std::vector<std::size_t>>();
    s.test = j.at("test").get<std::vector<std::size_t>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("split file: ") + e.what());
  }
}

std::array<std::size_t, 3> AllocateCounts(std::size_t n, const std::array<double, 3>& ratios) {
  std::array<std::int64_t, 3> parts{};
  std::int64_t total = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!(ratios[k] >= 0.0)) Fail(ErrorCode::kInvalidArgument, "split ratios must be >= 0");
    parts[k] = std::llround(ratios[k] * static_cast<double>(kPpm));
    total += parts[k];
  }
  if (total != kPpm) Fail(ErrorCode::kInvalidArgument, "split ratios must sum to 1");

  const auto nn = static_cast<std::int64_t>(n);
  std::array<std::size_t, 3> counts{};
  std::array<std::int64_t, 3> rem{};
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    counts[k] = static_cast<std::size_t>(nn * parts[k] / kPpm);
    rem[k] = nn * parts[k] % kPpm;
    assigned += static_cast<std::int64_t>(counts[k]);
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::int64_t left = nn - assigned, i = 0; left > 0; --left, ++i) ++counts[order[static_cast<std::size_t>(i)]];
  return counts;
}

SplitIndices StratifiedSplit(std::span<const int> labels, const SplitSpec& spec) {
  if (labels.empty()) Fail(ErrorCode::kInvalidArgument, "stratified split: empty labels");
  CheckBinary(labels);
  const Rng root(spec.seed);
  SplitIndices out;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Rng rng = root.Split(static_cast<std::uint64_t>(cls));
    rng.Shuffle(std::span<std::size_t>(idx));
    const auto counts = AllocateCounts(idx.size(), spec.ratios);
    auto it = idx.begin();
    for (auto [part, count] : {std::pair{&out.train, counts[0]}, std::pair{&out.valid, counts[1]},
                               std::pair{&out.test, counts[2]}}) {
      part->insert(part->end(), it, it + static_cast<std::ptrdiff_t>(count));
      it += static_cast<std::ptrdiff_t>(count);
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.valid.begin(), out.valid.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<Fold> StratifiedKFold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) Fail(ErrorCode::kInvalidArgument, "k-fold: k must be >= 2");
  CheckBinary(labels);
  const Rng root(seed);
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t counter = 0;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    if (idx.size() < k) {
      Fail(ErrorCode::kInvalidArgument, "k-fold: class " + std::to_string(cls) + " has " +
                                            std::to_string(idx.size()) + " members, fewer than k=" +
                                            std::to_string(k));
    }
    Rng rng = root.Split(static_cast<std::uint64_t>(cls) + 0x6b666f6c64ULL);
    rng.Shuffle(std::span<std::size_t>(idx));
    for (auto i : idx) fold_of[i] = counter++ % k;
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

PRCurve PrecisionRecallCurve(std::span<const int> y_true, std::span<const double> scores) {
  CheckScores(y_true, scores);
  RequireBothClasses(y_true, "pr_curve");
  const auto n_pos = ClassCounts(y_true).second;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

  PRCurve curve;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      (y_true[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    PRPoint p;
    p.threshold = t;
    p.tp = tp;
    p.fp = fp;
    p.fn = n_pos - tp;
    p.precision = SafeDiv(static_cast<double>(tp), static_cast<double>(tp + fp));
    p.recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    p.f1 = F1(p.precision, p.recall);
    curve.push_back(p);
  }
  std::reverse(curve.begin(), curve.end());
  return curve;
}

double OptimalThreshold(const PRCurve& curve) {
  if (curve.empty()) Fail(ErrorCode::kInvalidArgument, "optimal_threshold: empty curve");
  // F1 = 2TP / (2TP + FP + FN), compared exactly as a/b > c/d <=> a*d > c*b.
  // A zero denominator means F1 = 0.
  using U128 = unsigned __int128;
  auto ratio = [](const PRPoint& p) -> std::pair<U128, U128> {
    const U128 d = 2 * static_cast<U128>(p.tp) + p.fp + p.fn;
    return d == 0 ? std::pair<U128, U128>{0, 1} : std::pair<U128, U128>{2 * static_cast<U128>(p.tp), d};
  };
  std::size_t best = 0;
  auto [best_num, best_den] = ratio(curve[0]);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto [num, den] = ratio(curve[i]);
    if (num * best_den > best_num * den) {
      best = i;
      best_num = num;
      best_den = den;
    }
  }
  return curve[best].threshold;
}

double RocAuc(std::span<const int> y_true, std::span<const double> scores) {
  CheckScores(y_true, scores);
  RequireBothClasses(y_true, "roc_auc");
  const auto [n_neg, n_pos] = ClassCounts(y_true);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  // Twice the Mann-Whitney count, kept integral.
  std::uint64_t twice = 0, neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    std::uint64_t pos_here = 0, neg_here = 0;
    while (i < order.size() && scores[order[i]] == t) {
      (y_true[order[i]] == 1 ? pos_here : neg_here) += 1;
      ++i;
    }
    twice += pos_here * (2 * neg_below + neg_here);
    neg_below += neg_here;
  }
  return static_cast<double>(twice) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport ClassificationReport(std::span<const int> y_true, std::span<const int> y_pred,
                                std::span<const double> scores, double threshold) {
  if (y_true.size() != y_pred.size() || y_true.size() != scores.size()) {
    Fail(ErrorCode::kInvalidArgument, "classification_report: length mismatch");
  }
  CheckBinary(y_true);
  CheckBinary(y_pred);
  EvalReport r;
  r.threshold = threshold;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1) (y_pred[i] == 1 ? r.tp : r.fn) += 1;
    else (y_pred[i] == 1 ? r.fp : r.tn) += 1;
  }
  const double tp = static_cast<double>(r.tp), fp = static_cast<double>(r.fp);
  const double tn = static_cast<double>(r.tn), fn = static_cast<double>(r.fn);
  r.accuracy = SafeDiv(tp + tn, static_cast<double>(y_true.size()));
  auto& c1 = r.per_class[1];
  c1.precision = SafeDiv(tp, tp + fp);
  c1.recall = SafeDiv(tp, tp + fn);
  c1.f1 = F1(c1.precision, c1.recall);
  auto& c0 = r.per_class[0];
  c0.precision = SafeDiv(tn, tn + fn);
  c0.recall = SafeDiv(tn, tn + fp);
  c0.f1 = F1(c0.precision, c0.recall);
  const auto [neg, pos] = ClassCounts(y_true);
  r.auc_roc = (neg > 0 && pos > 0) ? RocAuc(y_true, scores) : 0.5;
  return r;
}

EvalReport EvaluateScores(std::span<const int> y_true, std::span<const double> scores, double threshold) {
  if (y_true.size() != scores.size()) Fail(ErrorCode::kInvalidArgument, "labels and scores differ in length");
  std::vector<int> pred(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) pred[i] = scores[i] >= threshold ? 1 : 0;
  return ClassificationReport(y_true, pred, scores, threshold);
}

double PositiveF1(std::span<const int> y_true, std::span<const double> scores, double threshold) {
  if (y_true.size() != scores.size()) Fail(ErrorCode::kInvalidArgument, "labels and scores differ in length");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (y_true[i] == 1) (pred ? tp : fn) += 1;
    else if (pred) ++fp;
  }
  const double p = SafeDiv(static_cast<double>(tp), static_cast<double>(tp + fp));
  const double r = SafeDiv(static_cast<double>(tp), static_cast<double>(tp + fn));
  return F1(p, r);
}

nlohmann::json EvalReport::ToJson() const {
  return {{"Accuracy", accuracy},
          {"Precision", {{"0", per_class[0].precision}, {"1", per_class[1].precision}}},
          {"Recall", {{"0", per_class[0].recall}, {"1", per_class[1].recall}}},
          {"F1-Score", {{"0", per_class[0].f1}, {"1", per_class[1].f1}}},
          {"AUC-ROC", auc_roc},
          {"threshold", threshold},
          {"confusion", {{"TP", tp}, {"FP", fp}, {"TN", tn}, {"FN", fn}}}};
}

EvalReport EvalReport::FromJson(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.accuracy = j.at("Accuracy").get<double>();
    for (int c = 0; c < 2; ++c) {
      const auto key = std::to_string(c);
      r.per_class[static_cast<std::size_t>(c)] = {j.at("Precision").at(key).get<double>(),
                                                  j.at("Recall").at(key).get<double>(),
                                                  j.at("F1-Score").at(key).get<double>()};
    }
    r.auc_roc = j.at("AUC-ROC").get<double>();
    r.threshold = j.at("threshold").get<double>();
    const auto& c = j.at("confusion");
    r.tp = c.at("TP").get<std::size_t>();
    r.fp = c.at("FP").get<std::size_t>();
    r.tn = c.at("TN").get<std::size_t>();
    r.fn = c.at("FN").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("eval report: ") + e.what());
  }
}

}  // namespace clintext
