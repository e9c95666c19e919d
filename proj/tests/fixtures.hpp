// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

// Shared test inputs: random-vector embedding files and scratch directories.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "clintext/corpus.hpp"
#include "clintext/featurize.hpp"
#include "clintext/rng.hpp"

namespace clintext::testing {

// One to three uniform vectors in [-1, 1) per note, seeded.
inline EmbeddingSet RandomEmbeddings(const Corpus& corpus, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EmbeddingSet::Record> records;
  for (const auto& note : corpus.notes()) {
    EmbeddingSet::Record r{note.id, {}};
    const auto k = rng.UniformRange(1, 3);
    for (std::int64_t s = 0; s < k; ++s) {
      std::vector<double> v(dim);
      for (auto& x : v) x = rng.UniformReal() * 2 - 1;
      r.vectors.push_back(std::move(v));
    }
    records.push_back(std::move(r));
  }
  return EmbeddingSet(dim, "random", std::move(records));
}

inline void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("clintext_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace clintext::testing
