// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <algorithm>
#include <cmath>

#include "clintext/error.hpp"
#include "clintext/models.hpp"

namespace clintext {

namespace {

// log(1 + e^z) without overflow.
double Softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void CheckInputs(const FeatureMatrix& x, std::span<const int> y) {
  if (x.size() != y.size()) Fail(ErrorCode::kInvalidArgument, "feature rows and labels differ in length");
  bool has0 = false, has1 = false;
  for (int v : y) {
    if (v == 0) has0 = true;
    else if (v == 1) has1 = true;
    else Fail(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
  if (!has0 || !has1) Fail(ErrorCode::kInvalidArgument, "training labels contain a single class");
  for (const auto& row : x.rows) {
    for (const auto& [j, v] : row.entries) {
      if (j >= x.cols) Fail(ErrorCode::kInvalidArgument, "feature index out of range");
      if (!std::isfinite(v)) Fail(ErrorCode::kInvalidArgument, "non-finite feature value");
    }
  }
}

}  // namespace

double LogRegModel::Margin(const SparseVector& x) const {
  double z = bias;
  for (const auto& [j, v] : x.entries) {
    if (j >= weights.size()) Fail(ErrorCode::kInvalidArgument, "logreg: feature index beyond model dimension");
    z += weights[j] * v;
  }
  return z;
}

double LogRegModel::PredictProba(const SparseVector& x) const {
  return ClampProbability(Sigmoid(Margin(x)));
}

double LogRegModel::PredictProba(std::span<const double> dense) const {
  if (dense.size() != weights.size()) {
    Fail(ErrorCode::kInvalidArgument, "logreg: input has " + std::to_string(dense.size()) +
                                          " features, model expects " + std::to_string(weights.size()));
  }
  double z = bias;
  for (std::size_t j = 0; j < dense.size(); ++j) z += weights[j] * dense[j];
  return ClampProbability(Sigmoid(z));
}

nlohmann::json LogRegModel::ToJson() const {
  return {{"lambda", lambda}, {"bias", bias}, {"weights", weights}};
}

LogRegModel LogRegModel::FromJson(const nlohmann::json& j) {
  try {
    LogRegModel m;
    m.lambda = j.at("lambda").get<double>();
    m.bias = j.at("bias").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("logreg model: ") + e.what());
  }
}

LogRegObjective::LogRegObjective(const FeatureMatrix& x, std::span<const int> y,
                                 std::vector<double> sample_weights, double lambda)
    : x_(x), y_(y), s_(std::move(sample_weights)), lambda_(lambda) {
  if (s_.size() != y_.size() || x_.size() != y_.size()) {
    Fail(ErrorCode::kInvalidArgument, "logreg objective: size mismatch");
  }
  for (double s : s_) total_weight_ += s;
  if (!(total_weight_ > 0.0)) Fail(ErrorCode::kInvalidArgument, "logreg objective: zero total weight");
}

double LogRegObjective::Value(std::span<const double> w, double b) const {
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double z = x_.rows[i].Dot(w) + b;
    loss += s_[i] * (Softplus(z) - y_[i] * z);
  }
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss / total_weight_ + 0.5 * lambda_ * reg;
}

double LogRegObjective::Gradient(std::span<const double> w, double b, std::vector<double>& grad_w,
                                 double& grad_b) const {
  grad_w.assign(w.size(), 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double z = x_.rows[i].Dot(w) + b;
    loss += s_[i] * (Softplus(z) - y_[i] * z);
    const double r = s_[i] * (Sigmoid(z) - y_[i]);
    grad_b += r;
    for (const auto& [j, v] : x_.rows[i].entries) grad_w[j] += r * v;
  }
  double reg = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    grad_w[j] = grad_w[j] / total_weight_ + lambda_ * w[j];
    reg += w[j] * w[j];
  }
  grad_b /= total_weight_;
  return loss / total_weight_ + 0.5 * lambda_ * reg;
}

LogRegModel TrainLogReg(const FeatureMatrix& x, std::span<const int> y, const ClassWeights& weights,
                        const LogRegParams& params, std::uint64_t /*seed*/, LogRegTrace* trace) {
  CheckInputs(x, y);
  weights.Validate();
  if (!(params.lambda >= 0.0) || !std::isfinite(params.lambda)) {
    Fail(ErrorCode::kInvalidArgument, "logreg: lambda must be finite and >= 0");
  }
  const LogRegObjective objective(x, y, weights.PerSample(y), params.lambda);
  const std::size_t d = x.cols;

  std::vector<double> w(d, 0.0), gw, w_next(d);
  double b = 0.0, gb = 0.0;
  double loss = objective.Gradient(w, b, gw, gb);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  auto record = [&](double value) {
    if (!trace) return;
    trace->losses.push_back(value);
    if (trace->record_iterates) {
      auto p = w;
      p.push_back(b);
      trace->iterates.push_back(std::move(p));
    }
  };
  if (trace) {
    trace->losses.clear();
    trace->iterates.clear();
    trace->iterations = 0;
    trace->converged = false;
  }
  record(loss);

  int iter = 0;
  bool converged = false;
  while (true) {
    double gmax = std::abs(gb), gnorm2 = gb * gb;
    for (double g : gw) {
      gmax = std::max(gmax, std::abs(g));
      gnorm2 += g * g;
    }
    if (gmax < params.tol) {
      converged = true;
      break;
    }
    if (iter >= params.max_iter) break;

    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      for (std::size_t j = 0; j < d; ++j) w_next[j] = w[j] - step * gw[j];
      const double b_next = b - step * gb;
      const double trial = objective.Value(w_next, b_next);
      if (trial <= loss - kArmijo * step * gnorm2) {
        w.swap(w_next);
        b = b_next;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent at machine precision
    ++iter;
    loss = objective.Gradient(w, b, gw, gb);
    record(loss);
    step = std::min(step * 2.0, 1e6);
  }
  if (trace) {
    trace->iterations = iter;
    trace->converged = converged;
  }
  return LogRegModel{std::move(w), b, params.lambda};
}

}  // namespace clintext
