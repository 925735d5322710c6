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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gainsel/budget.hpp"
#include "gainsel/error.hpp"
#include "gainsel/rng.hpp"
#include "oracles.hpp"

namespace gainsel {
namespace {

using Sizes = std::vector<std::size_t>;

double deviation(const Sizes& sizes, const Sizes& plan, std::size_t budget) {
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  double dev = 0.0;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    dev += std::fabs(static_cast<double>(plan[l]) -
                     static_cast<double>(sizes[l]) * static_cast<double>(budget) / total);
  }
  return dev;
}

TEST(AllocateBudgets, ExactProportions) {
  const Sizes sizes{50, 30, 20};
  EXPECT_EQ(allocate_budgets(sizes, 10).per_cluster, (Sizes{5, 3, 2}));
  EXPECT_EQ(allocate_budgets(Sizes{10}, 5).per_cluster, (Sizes{5}));
}

TEST(AllocateBudgets, OvershootFromMinimumOneIsTrimmed) {
  const Sizes sizes{1, 1, 98};
  const auto plan = allocate_budgets(sizes, 10);
  EXPECT_EQ(plan.per_cluster, (Sizes{1, 1, 8}));
  EXPECT_EQ(plan.total_allocated, 10u);
  EXPECT_NEAR(deviation(sizes, plan.per_cluster, 10), testing::best_plan_deviation(sizes, 10),
              1e-9);
}

TEST(AllocateBudgets, UndershootFromFloorsIsFilled) {
  const Sizes sizes{3, 3, 3};
  const auto plan = allocate_budgets(sizes, 7);
  EXPECT_EQ(plan.per_cluster, (Sizes{3, 2, 2}));
}

TEST(AllocateBudgets, MoreClustersThanBudget) {
  const Sizes sizes{5, 1, 9, 2, 7};
  const auto plan = allocate_budgets(sizes, 3);
  EXPECT_EQ(std::accumulate(plan.per_cluster.begin(), plan.per_cluster.end(), std::size_t{0}), 3u);
  // The largest shares survive.
  EXPECT_EQ(plan.per_cluster, (Sizes{1, 0, 1, 0, 1}));
}

TEST(AllocateBudgets, Errors) {
  EXPECT_THROW(allocate_budgets(Sizes{}, 1), InputError);
  EXPECT_THROW(allocate_budgets(Sizes{2, 3}, 6), InputError);
  EXPECT_THROW(allocate_budgets(Sizes{2, 3}, 0), InputError);
}

TEST(AllocateBudgets, RandomInstancesAreFeasibleAndOptimal) {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    Sizes sizes(1 + rng.below(6));
    for (auto& s : sizes) s = 1 + rng.below(rng.below(2) ? 4 : 40);
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    const std::size_t budget = 1 + rng.below(std::min<std::size_t>(total, 30));
    const auto plan = allocate_budgets(sizes, budget);
    EXPECT_EQ(std::accumulate(plan.per_cluster.begin(), plan.per_cluster.end(), std::size_t{0}),
              budget);
    for (std::size_t l = 0; l < sizes.size(); ++l) {
      EXPECT_LE(plan.per_cluster[l], sizes[l]);
      if (budget >= sizes.size()) EXPECT_GE(plan.per_cluster[l], 1u);
    }
    EXPECT_NEAR(deviation(sizes, plan.per_cluster, budget),
                testing::best_plan_deviation(sizes, budget), 1e-9)
        << "trial " << trial << " budget " << budget << " sizes " << ::testing::PrintToString(sizes)
        << " plan " << ::testing::PrintToString(plan.per_cluster);
  }
}

TEST(AllocateBudgets, EqualSizedClustersGetPermutedPlans) {
  const Sizes a{7, 7, 3, 7};
  const Sizes b{7, 3, 7, 7};
  auto pa = allocate_budgets(a, 11).per_cluster;
  auto pb = allocate_budgets(b, 11).per_cluster;
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  EXPECT_EQ(pa, pb);
}

TEST(AllocateAverage, EqualSplitWithOverflow) {
  EXPECT_EQ(allocate_average(Sizes{10, 10, 10}, 9).per_cluster, (Sizes{3, 3, 3}));
  EXPECT_EQ(allocate_average(Sizes{10, 20, 10}, 10).per_cluster, (Sizes{3, 4, 3}));
  // Cluster 0 can only take 1; its surplus goes round-robin to the largest clusters.
  EXPECT_EQ(allocate_average(Sizes{1, 20, 10}, 9).per_cluster, (Sizes{1, 4, 4}));
  EXPECT_EQ(allocate_average(Sizes{4, 4, 4, 4}, 2).per_cluster, (Sizes{1, 1, 0, 0}));
}

}  // namespace
}  // namespace gainsel
