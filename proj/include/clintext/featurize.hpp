// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace clintext {

class Corpus;

// Dictionary plus suffix-rule lemmatizer.
//
// Only tokens made of lowercase ASCII letters with length >= 4 are touched.
// The exception dictionary is consulted first. Otherwise exactly one rule
// applies, tried in this order:
//   1. "-ing" / "-ed" (not "-eed"): strip when the stem keeps >= 3 letters and
//      contains a vowel (a e i o u y). Then
//        stem ends in "at", "bl" or "iz"          -> append "e"
//        stem ends in a doubled consonant (not s/z; "ll" only when the
//        stem has two or more vowel-consonant runs)  -> drop one letter
//        stem has <= 4 letters and ends consonant-vowel-consonant with the
//        last letter not w/x/y                     -> append "e"
//   2. "-sses" -> "-ss"
//   3. "-ies" -> "-y" when the token has > 4 letters
//   4. "-ss", "-us", "-is" -> unchanged
//   5. "-es" after s, x, z, ch or sh -> strip "es"
//   6. "-s" -> strip
// Examples: ambulating -> ambulate, dropping -> drop, noted -> note,
// falling -> fall, controlled -> control,
// therapies -> therapy, boxes -> box, patients -> patient.
class Lemmatizer {
 public:
  Lemmatizer() = default;
  explicit Lemmatizer(std::unordered_map<std::string, std::string> exceptions)
      : exceptions_(std::move(exceptions)) {}

  // Built-in exception list (data/lemma_exceptions.txt).
  static const Lemmatizer& Default();
  static Lemmatizer Parse(std::string_view exceptions_text);

  std::string Lemma(std::string_view token) const;

 private:
  std::unordered_map<std::string, std::string> exceptions_;
};

// Splits cleaned text on spaces. With a lemmatizer, each token is replaced by
// its lemma.
std::vector<std::string> Tokenize(std::string_view text, const Lemmatizer* lemmatizer = nullptr);

// Sorted (index, weight) pairs.
struct SparseVector {
  std::vector<std::pair<std::size_t, double>> entries;

  double Dot(std::span<const double> dense) const;
  double Norm() const;
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Row-major sparse design matrix.
struct FeatureMatrix {
  std::size_t cols = 0;
  std::vector<SparseVector> rows;

  std::size_t size() const { return rows.size(); }
  FeatureMatrix Subset(std::span<const std::size_t> indices) const;
  static FeatureMatrix FromDense(const std::vector<std::vector<double>>& dense);
};

struct TfidfConfig {
  std::size_t max_features = 5000;
  std::size_t ngram_min = 1;
  std::size_t ngram_max = 2;
  bool lemmatize = true;
};

// Contiguous n-grams joined by single spaces, for every n in [lo, hi].
std::vector<std::string> NGrams(const std::vector<std::string>& tokens, std::size_t lo, std::size_t hi);

// Vocabulary and smoothed idf weights fitted on a document collection.
//
// Candidate terms are all n-grams in the configured range. The max_features
// terms with the highest total occurrence count are kept (ties go to the
// lexicographically smaller term); column indices follow lexicographic term
// order. idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class TfidfModel {
 public:
  TfidfModel() = default;

  // Throws Error(kInvalidArgument) on an empty list and "no terms" when no
  // document has a token.
  static TfidfModel Fit(const std::vector<std::vector<std::string>>& docs,
                        const TfidfConfig& config = {});

  // Raw term count times idf, then L2-normalized. Out-of-vocabulary terms are
  // ignored; a document with none in the vocabulary maps to the zero vector.
  SparseVector Transform(const std::vector<std::string>& doc) const;
  FeatureMatrix TransformAll(const std::vector<std::vector<std::string>>& docs) const;

  const TfidfConfig& config() const { return config_; }
  std::size_t num_docs() const { return num_docs_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  // -1 when absent.
  long Index(const std::string& term) const;
  double Idf(const std::string& term) const;

  nlohmann::json ToJson() const;
  static TfidfModel FromJson(const nlohmann::json& j);

  friend bool operator==(const TfidfModel& a, const TfidfModel& b) {
    return a.terms_ == b.terms_ && a.idf_ == b.idf_ && a.num_docs_ == b.num_docs_;
  }

 private:
  TfidfConfig config_;
  std::size_t num_docs_ = 0;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Per-note sentence vectors read from an embeddings JSONL file: a header line
// {"dim": int, "encoder": string}, then {"note_id": string, "vectors": [[...]]}
// per note.
class EmbeddingSet {
 public:
  struct Record {
    std::string note_id;
    std::vector<std::vector<double>> vectors;
  };

  EmbeddingSet() = default;
  // Throws Error(kValidation) on dimension mismatch, duplicate ids or a record
  // without vectors.
  EmbeddingSet(std::size_t dim, std::string encoder, std::vector<Record> records);

  std::size_t dim() const { return dim_; }
  const std::string& encoder() const { return encoder_; }
  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  const Record* Find(const std::string& note_id) const;
  // Throws Error(kValidation) naming the first corpus note without a record.
  void RequireCoverage(const Corpus& corpus) const;
  // Mean-pooled vector of one note.
  std::vector<double> Pooled(const std::string& note_id) const;

 private:
  std::size_t dim_ = 0;
  std::string encoder_;
  std::vector<Record> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingSet ParseEmbeddings(std::string_view jsonl);
EmbeddingSet LoadEmbeddings(const std::filesystem::path& path);
std::string SerializeEmbeddings(const EmbeddingSet& set);

// Componentwise arithmetic mean. Throws on an empty list or unequal lengths.
std::vector<double> MeanPool(const std::vector<std::vector<double>>& vectors);

}  // namespace clintext
