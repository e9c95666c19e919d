// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <cmath>

#include "clintext/error.hpp"
#include "clintext/models.hpp"

namespace clintext {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double ClampProbability(double p) { return std::min(std::max(p, kProbFloor), 1.0 - kProbFloor); }

void ClassWeights::Validate() const {
  if (!(std::isfinite(w0) && std::isfinite(w1) && w0 > 0.0 && w1 > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "class weights must be finite and positive");
  }
}

std::vector<double> ClassWeights::PerSample(std::span<const int> labels) const {
  std::vector<double> s;
  s.reserve(labels.size());
  for (int y : labels) s.push_back((*this)(y));
  return s;
}

ClassWeights ComputeClassWeights(std::span<const int> labels) {
  std::size_t n1 = 0;
  for (int y : labels) n1 += y == 1 ? 1 : 0;
  const std::size_t n = labels.size();
  const std::size_t n0 = n - n1;
  if (n0 == 0 || n1 == 0) Fail(ErrorCode::kInvalidArgument, "class weights need both classes present");
  const double dn = static_cast<double>(n);
  return ClassWeights{dn / (2.0 * static_cast<double>(n0)), dn / (2.0 * static_cast<double>(n1))};
}

std::string ToString(ClassifierKind kind) {
  return kind == ClassifierKind::kLogReg ? "logreg" : "gbdt";
}

ClassifierKind ParseClassifierKind(const std::string& name) {
  if (name == "logreg") return ClassifierKind::kLogReg;
  if (name == "gbdt") return ClassifierKind::kGbdt;
  Fail(ErrorCode::kInvalidArgument, "unknown classifier '" + name + "' (expected logreg or gbdt)");
}

ClassifierKind Classifier::kind() const {
  return std::holds_alternative<LogRegModel>(model_) ? ClassifierKind::kLogReg : ClassifierKind::kGbdt;
}

double Classifier::PredictProba(const SparseVector& x) const {
  return std::visit([&](const auto& m) { return m.PredictProba(x); }, model_);
}

std::vector<double> Classifier::PredictAll(const FeatureMatrix& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x.rows) out.push_back(PredictProba(row));
  return out;
}

nlohmann::json Classifier::ToJson() const {
  auto j = std::visit([](const auto& m) { return m.ToJson(); }, model_);
  j["kind"] = ToString(kind());
  return j;
}

Classifier Classifier::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    Fail(ErrorCode::kParse, "classifier: missing kind tag");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "logreg") return Classifier(LogRegModel::FromJson(j));
  if (kind == "gbdt") return Classifier(GbdtModel::FromJson(j));
  Fail(ErrorCode::kParse, "classifier: unknown kind '" + kind + "'");
}

}  // namespace clintext
