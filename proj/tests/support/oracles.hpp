/*
 * Copyright 2026 The gainsel Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Independent reference implementations used only by tests. Nothing here
// calls into the library's entropy or allocation code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gainsel/datamodel.hpp"

namespace gainsel::testing {

using Dense = std::vector<std::vector<double>>;

inline double naive_kernel(std::span<const double> u, std::span<const double> v, double sigma) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) d2 += (u[k] - v[k]) * (u[k] - v[k]);
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

inline Dense naive_similarity(const EmbeddingStore& store, const std::vector<std::size_t>& rows,
                              double sigma) {
  Dense m(rows.size(), std::vector<double>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      m[i][j] = naive_kernel(store.row(rows[i]), store.row(rows[j]), sigma);
    }
  }
  return m;
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix.
inline std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  return ev;
}

inline double naive_entropy(const Dense& m) {
  if (m.size() <= 1) return 0.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) trace += m[i][i];
  Dense rho = m;
  for (auto& row : rho)
    for (auto& x : row) x /= trace;
  double e = 0.0;
  for (const double l : jacobi_eigenvalues(rho)) {
    if (l >= 1e-12) e -= l * std::log(l);
  }
  return e;
}

inline double naive_subset_entropy(const EmbeddingStore& store,
                                   const std::vector<std::size_t>& rows, double sigma) {
  return naive_entropy(naive_similarity(store, rows, sigma));
}

/// Closed-form entropy of the trace-normalized 2x2 matrix [[1, b], [b, 1]].
inline double two_by_two_entropy(double b) {
  const double l1 = (1.0 + b) / 2.0;
  const double l2 = (1.0 - b) / 2.0;
  auto term = [](double l) { return l > 0.0 ? -l * std::log(l) : 0.0; };
  return term(l1) + term(l2);
}

/// Pairwise agreement (Rand index) between two labelings.
inline double rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t agree = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      agree += ((a[i] == a[j]) == (b[i] == b[j])) ? 1 : 0;
      ++total;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(total);
}

/// Smallest possible (max load - min load) over every assignment of sizes to
/// `groups` groups.
inline std::size_t best_partition_spread(const std::vector<std::size_t>& sizes, std::size_t groups) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> load(groups, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == sizes.size()) {
      const auto [lo, hi] = std::minmax_element(load.begin(), load.end());
      best = std::min(best, *hi - *lo);
      return;
    }
    for (std::size_t g = 0; g < groups; ++g) {
      load[g] += sizes[i];
      rec(i + 1);
      load[g] -= sizes[i];
    }
  };
  rec(0);
  return best;
}

/// Minimum of sum_l |b_l - q_l| over integer plans with sum b = B and
/// lo_l <= b_l <= |C_l|, where lo_l = 1 when B >= L and 0 otherwise.
/// Returns infinity when no plan exists.
inline double best_plan_deviation(const std::vector<std::size_t>& sizes, std::size_t budget) {
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  // With fewer slots than clusters, at most one slot per cluster.
  const std::size_t lo = budget >= sizes.size() ? 1 : 0;
  const std::size_t hi_cap = budget >= sizes.size() ? budget : 1;
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t l, std::size_t left,
                                                                  double dev) {
    if (l == sizes.size()) {
      if (left == 0) best = std::min(best, dev);
      return;
    }
    const double q = static_cast<double>(sizes[l]) * static_cast<double>(budget) / total;
    for (std::size_t b = lo; b <= std::min({sizes[l], left, hi_cap}); ++b) {
      rec(l + 1, left - b, dev + std::fabs(static_cast<double>(b) - q));
    }
  };
  rec(0, budget, 0.0);
  return best;
}

}  // namespace gainsel::testing
