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
#include <functional>
#include <span>
#include <vector>

#include "gainsel/datamodel.hpp"
#include "gainsel/rng.hpp"

namespace gainsel {

struct ClusterSampleResult {
  std::size_t cluster = 0;
  std::vector<std::size_t> selected;   // store rows, in acceptance order
  std::vector<double> entropy_trace;   // entropy after each accepted row
  std::vector<std::size_t> initial_pair;  // random seed rows (1 or 2; empty when exhausted)
};

/// Called after each accepted row: (cluster, step, entropy after step).
using ProgressFn = std::function<void(std::size_t, std::size_t, double)>;

/// Greedy entropy-gain sampling inside one cluster.
///
/// With budget >= |members| every member is returned in ascending order.
/// Otherwise two distinct random members seed the set (one if budget == 1);
/// every further slot draws up to m unselected members uniformly without
/// replacement and accepts the one whose addition yields the highest entropy,
/// ties to the lowest row index. Negative gains are accepted when they are
/// the best on offer. Exactly `budget` rows are returned.
ClusterSampleResult greedy_sample_cluster(const EmbeddingStore& store,
                                          std::span<const std::size_t> members,
                                          std::size_t budget, std::size_t candidates,
                                          double sigma, Rng& rng,
                                          const ProgressFn& progress = {},
                                          std::size_t cluster_id = 0);

/// Greedy kernel-herding style baseline: starting from the empty set, each
/// step accepts the candidate minimizing
///   MMD^2(S, C) = mean_{i,j in S} k(i,j) - 2 mean_{i in S, j in C} k(i,j)
/// (the constant cluster self-similarity term dropped). Candidates are drawn
/// exactly as in greedy_sample_cluster. The entropy trace is the von Neumann
/// entropy of the set after each step.
ClusterSampleResult mmd_sample_cluster(const EmbeddingStore& store,
                                       std::span<const std::size_t> members,
                                       std::size_t budget, std::size_t candidates, double sigma,
                                       Rng& rng, const ProgressFn& progress = {},
                                       std::size_t cluster_id = 0);

/// k distinct indices drawn uniformly from [0, n) by partial Fisher-Yates.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace gainsel
