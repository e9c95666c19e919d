// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include "clintext/rng.hpp"

#include <bit>

namespace clintext {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  if (n <= 1) return 0;
  // Smallest k with 2^k >= n; draw k bits and reject values >= n.
  const int bits = 64 - std::countl_zero(n - 1);
  while (true) {
    const std::uint64_t v = bits == 64 ? Next() : (Next() >> (64 - bits));
    if (v < n) return v;
  }
}

std::int64_t Rng::UniformRange(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(UniformInt(span));
}

double Rng::UniformReal() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

Rng Rng::Split(std::uint64_t tag) const {
  return Rng(Mix64(seed_ ^ Mix64(tag + 0x9e3779b97f4a7c15ULL)));
}

Rng Rng::Split(std::string_view tag) const {
  // FNV-1a over the tag bytes.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return Split(h);
}

}  // namespace clintext
