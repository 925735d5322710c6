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
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gainsel/datamodel.hpp"

namespace gainsel {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct KMeansOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;  // max centroid displacement, embedding units
  std::size_t threads = 1;  // assignment-step parallelism; never changes results
};

struct ClusterAssignment {
  std::size_t num_clusters = 0;
  std::vector<std::size_t> labels;                // parallel to the kept list
  RowMatrix centroids;                            // num_clusters x dim
  std::vector<std::vector<std::size_t>> members;  // store rows, ascending
  double inertia = 0.0;
  std::vector<double> inertia_history;  // objective after each Lloyd iteration
  std::size_t iterations = 0;
  bool converged = false;

  std::vector<std::size_t> cluster_sizes() const;
};

/// Lloyd's algorithm from a k-means++ start on the rows listed in `kept`.
/// Squared Euclidean distance; clusters that empty out are reseeded with the
/// point farthest from its own centroid. Deterministic for a given seed.
ClusterAssignment kmeans(const EmbeddingStore& store, std::span<const std::size_t> kept,
                         std::size_t num_clusters, std::uint64_t seed,
                         const KMeansOptions& options = {});

struct ClusterGroups {
  std::vector<std::vector<std::size_t>> groups;  // cluster ids per worker
};

/// Longest-processing-time packing by member count: clusters in descending
/// size (ties by id) go to the currently lightest group (ties by group index).
ClusterGroups partition_by_size(std::span<const std::size_t> sizes, std::size_t num_groups);
ClusterGroups partition_clusters(const ClusterAssignment& assignment, std::size_t num_groups);

/// Centroids as a store, for the optional centroid dump.
EmbeddingStore centroid_store(const ClusterAssignment& assignment);

}  // namespace gainsel
