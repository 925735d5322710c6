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

#include "gainsel/oracle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gainsel/entropy.hpp"
#include "gainsel/error.hpp"

namespace gainsel {

OracleResult oracle_max_entropy_subset(const EmbeddingStore& store,
                                       std::span<const std::size_t> rows, std::size_t k,
                                       double sigma) {
  if (rows.size() > kOracleMaxRows) {
    std::ostringstream msg;
    msg << "oracle: " << rows.size() << " rows exceed the exhaustive-search limit of "
        << kOracleMaxRows;
    throw InputError(msg.str());
  }
  if (k < 1 || k > rows.size()) throw InputError("oracle: subset size out of range");

  std::vector<std::size_t> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("oracle: rows must be distinct");
  }

  // Full kernel once; each subset's matrix is a principal submatrix.
  const SimilarityState full = build_similarity(store, sorted, sigma);
  const Eigen::MatrixXd& m = full.matrix();

  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  std::vector<std::size_t> best_pos;
  double best = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  EntropyEvaluator entropy;
  const std::size_t n = sorted.size();
  for (;;) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            m(static_cast<Eigen::Index>(pos[a]), static_cast<Eigen::Index>(pos[b]));
      }
    }
    const double e = entropy(sub);
    if (e > best) {
      best = e;
      best_pos = pos;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }

  OracleResult out;
  out.entropy = best;
  for (const auto p : best_pos) out.rows.push_back(sorted[p]);
  return out;
}

}  // namespace gainsel
