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
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "gainsel/clustering.hpp"
#include "gainsel/error.hpp"
#include "gainsel/rng.hpp"
#include "gainsel/synthetic.hpp"
#include "oracles.hpp"

namespace gainsel {
namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void expect_centroids_are_means(const EmbeddingStore& store, const ClusterAssignment& a) {
  for (std::size_t c = 0; c < a.num_clusters; ++c) {
    ASSERT_FALSE(a.members[c].empty());
    for (std::size_t k = 0; k < store.dim(); ++k) {
      double mean = 0.0;
      for (const auto r : a.members[c]) mean += store.row(r)[k];
      mean /= static_cast<double>(a.members[c].size());
      EXPECT_NEAR(a.centroids(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)), mean,
                  1e-9);
    }
  }
}

TEST(KMeans, SingleCluster) {
  const auto d = gen_synthetic(50, 3, 2, 1.0, 4);
  const auto rows = all_rows(50);
  const auto a = kmeans(d.store, rows, 1, 9);
  EXPECT_EQ(a.members[0], rows);
  for (const auto l : a.labels) EXPECT_EQ(l, 0u);
  expect_centroids_are_means(d.store, a);
}

TEST(KMeans, TwoSeparatedBlobs) {
  const auto d = gen_synthetic(200, 4, 2, 0.3, 12);
  const auto a = kmeans(d.store, all_rows(200), 2, 1);
  EXPECT_GE(testing::rand_index(a.labels, d.labels), 0.95);
}

TEST(KMeans, TenBlobsRecovered) {
  const auto d = gen_synthetic(1000, 8, 10, 1.0, 1);
  const auto a = kmeans(d.store, all_rows(1000), 10, 1);
  EXPECT_GE(testing::rand_index(a.labels, d.labels), 0.95);
  expect_centroids_are_means(d.store, a);
}

TEST(KMeans, OneClusterPerSample) {
  const auto d = gen_synthetic(30, 2, 3, 1.0, 2);
  const auto a = kmeans(d.store, all_rows(30), 30, 5);
  EXPECT_EQ(a.inertia, 0.0);
  std::set<std::size_t> labels(a.labels.begin(), a.labels.end());
  EXPECT_EQ(labels.size(), 30u);
}

TEST(KMeans, DuplicatePointsStillFillEveryCluster) {
  const auto d = gen_synthetic(12, 2, 1, 0.0, 3);  // all identical
  const auto a = kmeans(d.store, all_rows(12), 4, 5);
  for (const auto& m : a.members) EXPECT_FALSE(m.empty());
  EXPECT_EQ(a.inertia, 0.0);
}

TEST(KMeans, SubsetOfRows) {
  const auto d = gen_synthetic(100, 3, 4, 0.5, 8);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < 100; i += 3) kept.push_back(i);
  const auto a = kmeans(d.store, kept, 4, 2);
  std::vector<std::size_t> all;
  for (const auto& m : a.members) all.insert(all.end(), m.begin(), m.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, kept);
  EXPECT_EQ(a.labels.size(), kept.size());
  for (std::size_t p = 0; p < kept.size(); ++p) {
    const auto& m = a.members[a.labels[p]];
    EXPECT_TRUE(std::binary_search(m.begin(), m.end(), kept[p]));
  }
}

TEST(KMeans, InertiaNonIncreasingAndDeterministic) {
  const auto d = gen_synthetic(600, 5, 12, 2.0, 31);
  const auto rows = all_rows(600);
  const auto a = kmeans(d.store, rows, 20, 7);
  for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
    EXPECT_LE(a.inertia_history[i], a.inertia_history[i - 1] * (1.0 + 1e-12));
  }
  expect_centroids_are_means(d.store, a);
  const auto b = kmeans(d.store, rows, 20, 7);
  EXPECT_EQ(a.labels, b.labels);
  KMeansOptions threaded;
  threaded.threads = 4;
  const auto c = kmeans(d.store, rows, 20, 7, threaded);
  EXPECT_EQ(a.labels, c.labels);
  EXPECT_EQ(a.centroids, c.centroids);
  EXPECT_EQ(a.inertia, c.inertia);
}

TEST(KMeans, Errors) {
  const auto d = gen_synthetic(5, 2, 1, 1.0, 0);
  EXPECT_THROW(kmeans(d.store, all_rows(5), 6, 0), InputError);
  EXPECT_THROW(kmeans(d.store, std::vector<std::size_t>{}, 1, 0), InputError);
  EXPECT_THROW(kmeans(d.store, all_rows(5), 0, 0), InputError);
}

std::vector<std::size_t> loads(const ClusterGroups& g, const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> out;
  for (const auto& grp : g.groups) {
    std::size_t s = 0;
    for (const auto c : grp) s += sizes[c];
    out.push_back(s);
  }
  return out;
}

TEST(PartitionClusters, FourClustersTwoWorkers) {
  const std::vector<std::size_t> sizes{40, 30, 20, 10};
  const auto g = partition_by_size(sizes, 2);
  auto l = loads(g, sizes);
  EXPECT_EQ(l, (std::vector<std::size_t>{50, 50}));
  EXPECT_EQ(g.groups[0], (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(g.groups[1], (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(testing::best_partition_spread(sizes, 2), 0u);
}

TEST(PartitionClusters, SingleAndSurplusWorkers) {
  const std::vector<std::size_t> sizes{5, 9, 2};
  const auto one = partition_by_size(sizes, 1);
  EXPECT_EQ(one.groups[0], (std::vector<std::size_t>{0, 1, 2}));
  const auto many = partition_by_size(sizes, 5);
  std::size_t nonempty = 0;
  for (const auto& grp : many.groups) {
    EXPECT_LE(grp.size(), 1u);
    nonempty += grp.size();
  }
  EXPECT_EQ(nonempty, 3u);
  EXPECT_THROW(partition_by_size(sizes, 0), InputError);
}

TEST(PartitionClusters, PartitionAndBalanceProperties) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> sizes(1 + rng.below(9));
    for (auto& s : sizes) s = 1 + rng.below(50);
    const std::size_t g = 1 + rng.below(4);
    const auto groups = partition_by_size(sizes, g);
    std::vector<std::size_t> ids;
    for (const auto& grp : groups.groups) ids.insert(ids.end(), grp.begin(), grp.end());
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(ids, all_rows(sizes.size()));
    const auto l = loads(groups, sizes);
    const auto [lo, hi] = std::minmax_element(l.begin(), l.end());
    EXPECT_LE(*hi - *lo, *std::max_element(sizes.begin(), sizes.end()));
    if (sizes.size() <= 7) {
      EXPECT_GE(*hi - *lo, testing::best_partition_spread(sizes, g));
    }
  }
}

TEST(CentroidStore, Shape) {
  const auto d = gen_synthetic(40, 3, 2, 0.5, 4);
  const auto a = kmeans(d.store, all_rows(40), 2, 1);
  const auto cs = centroid_store(a);
  EXPECT_EQ(cs.count(), 2u);
  EXPECT_EQ(cs.dim(), 3u);
}

}  // namespace
}  // namespace gainsel
