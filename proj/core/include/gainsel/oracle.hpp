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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gainsel/datamodel.hpp"

namespace gainsel {

inline constexpr std::size_t kOracleMaxRows = 20;

struct OracleResult {
  std::vector<std::size_t> rows;
  double entropy = 0.0;
};

/// Exhaustive search over all k-subsets of `rows` for the maximum von Neumann
/// entropy. Ties resolve to the lexicographically smallest index tuple (by
/// position in `rows`). Instances with more than kOracleMaxRows rows are
/// rejected.
OracleResult oracle_max_entropy_subset(const EmbeddingStore& store,
                                       std::span<const std::size_t> rows, std::size_t k,
                                       double sigma);

}  // namespace gainsel
