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

namespace gainsel {

struct BudgetPlan {
  std::vector<std::size_t> per_cluster;  // indexed by cluster id
  std::size_t total_requested = 0;
  std::size_t total_allocated = 0;
};

/// Proportional allocation max(1, floor(|C_l| / sum|C| * B)), clamped to the
/// cluster size, then reconciled so the budgets sum to exactly B.
///
/// Reconciliation works on the exact share q_l = |C_l| * B / sum|C|:
///  - short of B: add one at a time to the cluster with the largest
///    q_l - B_l that still has capacity;
///  - over B: take one at a time from the cluster with the smallest
///    q_l - B_l among those with B_l >= 2. Only when every cluster is at 1
///    (more clusters than budget) do clusters drop to 0, smallest share first.
/// Ties go to the lower cluster id.
BudgetPlan allocate_budgets(std::span<const std::size_t> cluster_sizes, std::size_t budget);

/// Equal split floor(B / L) with the remainder going to the largest clusters,
/// then overflow beyond a cluster's size handed to the largest clusters that
/// still have room. Budgets may be 0 when B < L.
BudgetPlan allocate_average(std::span<const std::size_t> cluster_sizes, std::size_t budget);

}  // namespace gainsel
