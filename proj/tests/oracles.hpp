// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

// Brute-force reference computations used by the unit and acceptance tests.
// Each one is written directly from the definition, without the sorting or
// sweeping the library uses.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace clintext::oracle {

// AUC by enumerating every (positive, negative) pair.
inline double PairAuc(std::span<const int> y, std::span<const double> s) {
  std::int64_t twice = 0, pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) twice += 2;
      else if (s[i] == s[j]) twice += 1;
    }
  }
  return static_cast<double>(twice) / static_cast<double>(2 * pairs);
}

struct Confusion {
  std::int64_t tp = 0, fp = 0, fn = 0;
};

inline Confusion CountAt(std::span<const int> y, std::span<const double> s, double t) {
  Confusion c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool pred = s[i] >= t;
    if (pred && y[i] == 1) ++c.tp;
    else if (pred) ++c.fp;
    else if (y[i] == 1) ++c.fn;
  }
  return c;
}

// Tries every observed score as the threshold. F1 = 2TP / (2TP + FP + FN) is
// compared by cross-multiplication; 0/0 counts as 0. Ties keep the smaller
// threshold.
inline double ScanBestThreshold(std::span<const int> y, std::span<const double> s) {
  double best_t = std::numeric_limits<double>::infinity();
  std::int64_t best_num = -1, best_den = 1;
  for (double t : s) {
    const auto c = CountAt(y, s, t);
    std::int64_t num = 2 * c.tp, den = 2 * c.tp + c.fp + c.fn;
    if (den == 0) {
      num = 0;
      den = 1;
    }
    const bool better = best_num < 0 || num * best_den > best_num * den;
    const bool tie = best_num >= 0 && num * best_den == best_num * den;
    if (better || (tie && t < best_t)) {
      best_t = t;
      best_num = num;
      best_den = den;
    }
  }
  return best_t;
}

// Integer allocation (a, b, c) of n with a + b + c = n that minimizes the
// squared distance to (n p0, n p1, n p2), ratios in parts per million. Among
// equal distances the lexicographically largest (a, b) wins, i.e. spare units
// go to earlier parts.
inline std::array<std::int64_t, 3> NearestAllocation(std::int64_t n, const std::array<std::int64_t, 3>& ppm) {
  std::array<std::int64_t, 3> best{-1, -1, -1};
  __int128 best_d = -1;
  for (std::int64_t a = n; a >= 0; --a) {
    for (std::int64_t b = n - a; b >= 0; --b) {
      const std::int64_t c = n - a - b;
      __int128 d = 0;
      const std::array<std::int64_t, 3> v{a, b, c};
      for (int i = 0; i < 3; ++i) {
        const __int128 diff = static_cast<__int128>(v[i]) * 1000000 - static_cast<__int128>(n) * ppm[i];
        d += diff * diff;
      }
      if (best_d < 0 || d < best_d) {
        best_d = d;
        best = v;
      }
    }
  }
  return best;
}

}  // namespace clintext::oracle
