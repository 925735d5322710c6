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

#include "gainsel/budget.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gainsel/error.hpp"

namespace gainsel {
namespace {

std::size_t checked_total(std::span<const std::size_t> sizes, std::size_t budget) {
  if (sizes.empty()) throw InputError("budget allocation: empty cluster list");
  if (budget < 1) throw InputError("budget allocation: budget must be at least 1");
  std::size_t total = 0;
  for (const auto s : sizes) {
    if (s == 0) throw InputError("budget allocation: cluster sizes must be positive");
    total += s;
  }
  if (budget > total) {
    std::ostringstream msg;
    msg << "budget " << budget << " exceeds the " << total << " available samples";
    throw InputError(msg.str());
  }
  return total;
}

}  // namespace

BudgetPlan allocate_budgets(std::span<const std::size_t> cluster_sizes, std::size_t budget) {
  const std::size_t total = checked_total(cluster_sizes, budget);
  const std::size_t n = cluster_sizes.size();

  std::vector<double> share(n);
  std::vector<std::size_t> b(n);
  for (std::size_t l = 0; l < n; ++l) {
    share[l] = static_cast<double>(cluster_sizes[l]) * static_cast<double>(budget) /
               static_cast<double>(total);
    const auto base = static_cast<std::size_t>(std::floor(share[l]));
    b[l] = std::min(std::max<std::size_t>(1, base), cluster_sizes[l]);
  }

  std::size_t sum = std::accumulate(b.begin(), b.end(), std::size_t{0});
  while (sum < budget) {
    std::size_t pick = n;
    for (std::size_t l = 0; l < n; ++l) {
      if (b[l] >= cluster_sizes[l]) continue;
      if (pick == n || share[l] - static_cast<double>(b[l]) >
                           share[pick] - static_cast<double>(b[pick])) {
        pick = l;
      }
    }
    ++b[pick];
    ++sum;
  }
  while (sum > budget) {
    // Prefer clusters that stay nonempty; fall back to dropping a cluster to
    // zero only when every cluster holds a single sample.
    const std::size_t floor_keep = std::any_of(b.begin(), b.end(),
                                               [](std::size_t x) { return x >= 2; })
                                       ? 2
                                       : 1;
    std::size_t pick = n;
    for (std::size_t l = 0; l < n; ++l) {
      if (b[l] < floor_keep) continue;
      if (pick == n || share[l] - static_cast<double>(b[l]) <
                           share[pick] - static_cast<double>(b[pick])) {
        pick = l;
      }
    }
    --b[pick];
    --sum;
  }

  return BudgetPlan{std::move(b), budget, sum};
}

BudgetPlan allocate_average(std::span<const std::size_t> cluster_sizes, std::size_t budget) {
  checked_total(cluster_sizes, budget);
  const std::size_t n = cluster_sizes.size();

  // Largest clusters first, lower id on ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    return cluster_sizes[a] > cluster_sizes[c];
  });

  std::vector<std::size_t> b(n, budget / n);
  for (std::size_t r = 0; r < budget % n; ++r) ++b[order[r]];

  std::size_t overflow = 0;
  for (std::size_t l = 0; l < n; ++l) {
    if (b[l] > cluster_sizes[l]) {
      overflow += b[l] - cluster_sizes[l];
      b[l] = cluster_sizes[l];
    }
  }
  while (overflow > 0) {
    for (const auto l : order) {
      if (overflow == 0) break;
      if (b[l] < cluster_sizes[l]) {
        ++b[l];
        --overflow;
      }
    }
  }
  return BudgetPlan{std::move(b), budget, budget};
}

}  // namespace gainsel
