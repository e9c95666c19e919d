// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "clintext/corpus.hpp"
#include "clintext/error.hpp"
#include "clintext/resources.hpp"

namespace clintext {

using nlohmann::json;

namespace {

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Number of vowel-run/consonant-run pairs, as in "tr(ee)" = 0, "c(on)tr(ol)l" = 2.
int Measure(std::string_view s) {
  int m = 0;
  bool prev_vowel = false;
  for (char c : s) {
    const bool v = IsVowel(c);
    if (prev_vowel && !v) ++m;
    prev_vowel = v;
  }
  return m;
}

std::string FixStem(std::string stem) {
  const auto n = stem.size();
  if (EndsWith(stem, "at") || EndsWith(stem, "bl") || EndsWith(stem, "iz")) return stem + "e";
  const char last = stem[n - 1];
  if (n >= 2 && last == stem[n - 2] && !IsVowel(last) && last != 's' && last != 'z' &&
      (last != 'l' || Measure(stem) > 1)) {
    stem.pop_back();
    return stem;
  }
  if (n <= 4 && n >= 3 && !IsVowel(stem[n - 3]) && IsVowel(stem[n - 2]) && !IsVowel(last) &&
      last != 'w' && last != 'x' && last != 'y') {
    return stem + "e";
  }
  return stem;
}

}  // namespace

const Lemmatizer& Lemmatizer::Default() {
  static const Lemmatizer lemmatizer = Parse(resources::lemma_exceptions());
  return lemmatizer;
}

Lemmatizer Lemmatizer::Parse(std::string_view exceptions_text) {
  std::unordered_map<std::string, std::string> map;
  for (const auto& line : ParseWordList(exceptions_text)) {
    std::istringstream in(line);
    std::string form, lemma;
    if (!(in >> form >> lemma)) Fail(ErrorCode::kParse, "lemma exceptions: bad line '" + line + "'");
    map[form] = lemma;
  }
  return Lemmatizer(std::move(map));
}

std::string Lemmatizer::Lemma(std::string_view token) const {
  std::string t(token);
  if (auto it = exceptions_.find(t); it != exceptions_.end()) return it->second;
  if (t.size() < 4) return t;
  for (char c : t) {
    if (c < 'a' || c > 'z') return t;
  }

  auto try_verbal = [&](std::string_view suffix) -> std::optional<std::string> {
    if (!EndsWith(t, suffix)) return std::nullopt;
    std::string stem = t.substr(0, t.size() - suffix.size());
    if (stem.size() < 3 || std::none_of(stem.begin(), stem.end(), IsVowel)) return std::nullopt;
    return FixStem(std::move(stem));
  };
  if (auto s = try_verbal("ing")) return *s;
  if (!EndsWith(t, "eed")) {
    if (auto s = try_verbal("ed")) return *s;
  }
  if (EndsWith(t, "sses")) return t.substr(0, t.size() - 2);
  if (EndsWith(t, "ies") && t.size() > 4) return t.substr(0, t.size() - 3) + "y";
  if (EndsWith(t, "ss") || EndsWith(t, "us") || EndsWith(t, "is")) return t;
  if (EndsWith(t, "es")) {
    const std::string_view stem(t.data(), t.size() - 2);
    if (EndsWith(stem, "s") || EndsWith(stem, "x") || EndsWith(stem, "z") || EndsWith(stem, "ch") ||
        EndsWith(stem, "sh")) {
      return std::string(stem);
    }
  }
  if (EndsWith(t, "s")) return t.substr(0, t.size() - 1);
  return t;
}

std::vector<std::string> Tokenize(std::string_view text, const Lemmatizer* lemmatizer) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto j = text.find(' ', i);
    const auto end = j == std::string_view::npos ? text.size() : j;
    if (end > i) {
      auto tok = text.substr(i, end - i);
      out.push_back(lemmatizer ? lemmatizer->Lemma(tok) : std::string(tok));
    }
    i = end + 1;
  }
  return out;
}

double SparseVector::Dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const auto& [i, w] : entries) s += w * dense[i];
  return s;
}

double SparseVector::Norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.second * e.second;
  return std::sqrt(s);
}

FeatureMatrix FeatureMatrix::Subset(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.cols = cols;
  out.rows.reserve(indices.size());
  for (auto i : indices) out.rows.push_back(rows.at(i));
  return out;
}

FeatureMatrix FeatureMatrix::FromDense(const std::vector<std::vector<double>>& dense) {
  FeatureMatrix out;
  out.cols = dense.empty() ? 0 : dense.front().size();
  out.rows.reserve(dense.size());
  for (const auto& row : dense) {
    if (row.size() != out.cols) Fail(ErrorCode::kInvalidArgument, "ragged dense matrix");
    SparseVector v;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) v.entries.emplace_back(j, row[j]);
    }
    out.rows.push_back(std::move(v));
  }
  return out;
}

std::vector<std::string> NGrams(const std::vector<std::string>& tokens, std::size_t lo, std::size_t hi) {
  std::vector<std::string> out;
  for (std::size_t n = std::max<std::size_t>(lo, 1); n <= hi; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (std::size_t k = 1; k < n; ++k) {
        g += ' ';
        g += tokens[i + k];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

TfidfModel TfidfModel::Fit(const std::vector<std::vector<std::string>>& docs, const TfidfConfig& config) {
  if (docs.empty()) Fail(ErrorCode::kInvalidArgument, "tfidf: empty document list");
  if (config.ngram_min < 1 || config.ngram_max < config.ngram_min) {
    Fail(ErrorCode::kInvalidArgument, "tfidf: bad n-gram range");
  }
  if (config.max_features == 0) Fail(ErrorCode::kInvalidArgument, "tfidf: max_features must be positive");

  struct Stat {
    std::size_t count = 0;
    std::size_t df = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  for (const auto& doc : docs) {
    std::unordered_set<std::string> seen;
    for (auto& g : NGrams(doc, config.ngram_min, config.ngram_max)) {
      auto& s = stats[g];
      ++s.count;
      if (seen.insert(std::move(g)).second) ++s.df;
    }
  }
  if (stats.empty()) Fail(ErrorCode::kInvalidArgument, "tfidf: no terms");

  std::vector<std::pair<std::string, Stat>> ranked(stats.begin(), stats.end());
  const auto keep = std::min(config.max_features, ranked.size());
  auto by_count = [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.first < b.first;
  };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    by_count);
  ranked.resize(keep);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  TfidfModel model;
  model.config_ = config;
  model.num_docs_ = docs.size();
  const double n1 = 1.0 + static_cast<double>(docs.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    model.terms_.push_back(ranked[i].first);
    model.idf_.push_back(std::log(n1 / (1.0 + static_cast<double>(ranked[i].second.df))) + 1.0);
    model.index_.emplace(ranked[i].first, i);
  }
  return model;
}

SparseVector TfidfModel::Transform(const std::vector<std::string>& doc) const {
  std::map<std::size_t, double> counts;
  for (const auto& g : NGrams(doc, config_.ngram_min, config_.ngram_max)) {
    if (auto it = index_.find(g); it != index_.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  v.entries.reserve(counts.size());
  double norm2 = 0.0;
  for (const auto& [i, c] : counts) {
    const double w = c * idf_[i];
    v.entries.emplace_back(i, w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& e : v.entries) e.second *= inv;
  }
  return v;
}

FeatureMatrix TfidfModel::TransformAll(const std::vector<std::vector<std::string>>& docs) const {
  FeatureMatrix m;
  m.cols = terms_.size();
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(Transform(d));
  return m;
}

long TfidfModel::Index(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

double TfidfModel::Idf(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) Fail(ErrorCode::kInvalidArgument, "tfidf: unknown term '" + term + "'");
  return idf_[it->second];
}

json TfidfModel::ToJson() const {
  json vocab = json::object();
  json idf = json::object();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    vocab[terms_[i]] = i;
    idf[terms_[i]] = idf_[i];
  }
  return json{{"vocabulary", vocab},
              {"idf", idf},
              {"config",
               {{"max_features", config_.max_features},
                {"ngram_range", {config_.ngram_min, config_.ngram_max}},
                {"lemmatize", config_.lemmatize},
                {"num_docs", num_docs_}}}};
}

TfidfModel TfidfModel::FromJson(const json& j) {
  try {
    TfidfModel m;
    const auto& cfg = j.at("config");
    m.config_.max_features = cfg.at("max_features").get<std::size_t>();
    m.config_.ngram_min = cfg.at("ngram_range").at(0).get<std::size_t>();
    m.config_.ngram_max = cfg.at("ngram_range").at(1).get<std::size_t>();
    m.config_.lemmatize = cfg.at("lemmatize").get<bool>();
    m.num_docs_ = cfg.at("num_docs").get<std::size_t>();
    const auto& vocab = j.at("vocabulary");
    const auto& idf = j.at("idf");
    m.terms_.assign(vocab.size(), {});
    m.idf_.assign(vocab.size(), 0.0);
    std::vector<bool> filled(vocab.size(), false);
    for (const auto& [term, idx] : vocab.items()) {
      const auto i = idx.get<std::size_t>();
      if (i >= vocab.size() || filled[i]) Fail(ErrorCode::kParse, "tfidf: vocabulary indices are not 0..n-1");
      filled[i] = true;
      m.terms_[i] = term;
      m.idf_[i] = idf.at(term).get<double>();
      if (!(m.idf_[i] > 0.0) || !std::isfinite(m.idf_[i])) Fail(ErrorCode::kParse, "tfidf: bad idf for '" + term + "'");
      m.index_.emplace(term, i);
    }
    if (m.terms_.size() > m.config_.max_features) Fail(ErrorCode::kParse, "tfidf: vocabulary exceeds max_features");
    return m;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("tfidf model: ") + e.what());
  }
}

EmbeddingSet::EmbeddingSet(std::size_t dim, std::string encoder, std::vector<Record> records)
    : dim_(dim), encoder_(std::move(encoder)), records_(std::move(records)) {
  if (dim_ == 0) Fail(ErrorCode::kValidation, "embeddings: dim must be positive");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.vectors.empty()) Fail(ErrorCode::kValidation, "embeddings: note " + r.note_id + " has no vectors");
    for (const auto& v : r.vectors) {
      if (v.size() != dim_) {
        Fail(ErrorCode::kValidation, "embeddings: note " + r.note_id + " has a vector of length " +
                                         std::to_string(v.size()) + ", expected " + std::to_string(dim_));
      }
      for (double x : v) {
        if (!std::isfinite(x)) Fail(ErrorCode::kValidation, "embeddings: note " + r.note_id + " has a non-finite value");
      }
    }
    if (!index_.emplace(r.note_id, i).second) {
      Fail(ErrorCode::kValidation, "embeddings: duplicate note_id " + r.note_id);
    }
  }
}

const EmbeddingSet::Record* EmbeddingSet::Find(const std::string& note_id) const {
  auto it = index_.find(note_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

void EmbeddingSet::RequireCoverage(const Corpus& corpus) const {
  for (const auto& note : corpus.notes()) {
    if (!Find(note.id)) Fail(ErrorCode::kValidation, "embeddings: missing note_id " + note.id);
  }
}

std::vector<double> EmbeddingSet::Pooled(const std::string& note_id) const {
  const auto* r = Find(note_id);
  if (!r) Fail(ErrorCode::kValidation, "embeddings: missing note_id " + note_id);
  return MeanPool(r->vectors);
}

EmbeddingSet ParseEmbeddings(std::string_view jsonl) {
  std::size_t dim = 0;
  std::string encoder;
  bool have_header = false;
  std::vector<EmbeddingSet::Record> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    auto line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "embeddings line " + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kParse, where + ": malformed JSON (" + e.what() + ")");
    }
    try {
      if (!have_header) {
        dim = rec.at("dim").get<std::size_t>();
        encoder = rec.contains("encoder") ? rec.at("encoder").get<std::string>() : std::string();
        have_header = true;
        continue;
      }
      EmbeddingSet::Record r;
      r.note_id = rec.at("note_id").get<std::string>();
      r.vectors = rec.at("vectors").get<std::vector<std::vector<double>>>();
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      Fail(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  if (!have_header) Fail(ErrorCode::kParse, "embeddings: missing header line");
  return EmbeddingSet(dim, std::move(encoder), std::move(records));
}

EmbeddingSet LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseEmbeddings(ss.str());
}

std::string SerializeEmbeddings(const EmbeddingSet& set) {
  std::string out = json{{"dim", set.dim()}, {"encoder", set.encoder()}}.dump();
  out += '\n';
  for (const auto& r : set.records()) {
    out += json{{"note_id", r.note_id}, {"vectors", r.vectors}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<double> MeanPool(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) Fail(ErrorCode::kInvalidArgument, "mean_pool: empty vector list");
  const auto dim = vectors.front().size();
  std::vector<double> sum(dim, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != dim) Fail(ErrorCode::kInvalidArgument, "mean_pool: unequal vector lengths");
    for (std::size_t i = 0; i < dim; ++i) sum[i] += v[i];
  }
  const double n = static_cast<double>(vectors.size());
  for (auto& x : sum) x /= n;
  return sum;
}

}  // namespace clintext
