// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace clintext {

// SplitMix64 finalizer. Used to derive child seeds.
std::uint64_t Mix64(std::uint64_t x);

// Deterministic generator with portable derived distributions.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The standard library distributions are not (they differ across
// implementations), so bounded integers, uniform reals and shuffles are
// computed here:
//   - UniformInt(n): rejection sampling on the top bits of one 64-bit draw.
//   - UniformReal(): (draw >> 11) * 2^-53, in [0, 1).
//   - Shuffle: Fisher-Yates from the back, j = UniformInt(i + 1).
// Split(tag) returns an independent stream seeded with
// Mix64(seed ^ Mix64(tag + 0x9e3779b97f4a7c15)), so sub-tasks do not consume
// each other's draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t UniformInt(std::uint64_t n);

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t UniformRange(std::int64_t lo, std::int64_t hi);

  double UniformReal();

  bool Bernoulli(double p) { return UniformReal() < p; }

  Rng Split(std::uint64_t tag) const;
  Rng Split(std::string_view tag) const;

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace clintext
