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

#include "gainsel/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "gainsel/error.hpp"
#include "gainsel/rng.hpp"

namespace gainsel {
namespace {

constexpr std::size_t kChunkRows = 1024;
constexpr std::uint64_t kInitStream = 0x6b6d65616e73ULL;

// Runs fn(chunk) for every chunk index, spread over `threads` threads.
// Outputs must be written per chunk so results never depend on scheduling.
template <typename Fn>
void for_each_chunk(std::size_t n_chunks, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n_chunks));
  if (threads == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < n_chunks; c += threads) fn(c);
    });
  }
}

double squared_distance(const RowMatrix& a, Eigen::Index i, const RowMatrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

class Lloyd {
 public:
  Lloyd(const EmbeddingStore& store, std::span<const std::size_t> kept, std::size_t num_clusters,
        const KMeansOptions& options)
      : n_(kept.size()),
        k_(num_clusters),
        threads_(std::max<std::size_t>(1, options.threads)),
        n_chunks_((n_ + kChunkRows - 1) / kChunkRows),
        points_(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(store.dim())),
        centroids_(static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(store.dim())),
        labels_(n_, 0),
        d2_(n_, 0.0) {
    for (std::size_t p = 0; p < n_; ++p) {
      const auto row = store.row(kept[p]);
      for (std::size_t c = 0; c < row.size(); ++c) {
        points_(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) = row[c];
      }
    }
  }

  void init_plus_plus(Rng& rng) {
    std::vector<double> min_d2(n_);
    std::size_t pick = rng.below(n_);
    centroids_.row(0) = points_.row(static_cast<Eigen::Index>(pick));
    for_each_chunk(n_chunks_, threads_, [&](std::size_t c) {
      for (std::size_t i = c * kChunkRows; i < std::min(n_, (c + 1) * kChunkRows); ++i) {
        min_d2[i] = squared_distance(points_, static_cast<Eigen::Index>(i), centroids_, 0);
      }
    });
    for (std::size_t j = 1; j < k_; ++j) {
      double total = 0.0;
      for (const double v : min_d2) total += v;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double cum = 0.0;
        pick = n_;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < n_; ++i) {
          if (min_d2[i] <= 0.0) continue;
          last_positive = i;
          cum += min_d2[i];
          if (cum > target) {
            pick = i;
            break;
          }
        }
        if (pick == n_) pick = last_positive;
      } else {
        pick = rng.below(n_);
      }
      const auto jj = static_cast<Eigen::Index>(j);
      centroids_.row(jj) = points_.row(static_cast<Eigen::Index>(pick));
      for_each_chunk(n_chunks_, threads_, [&](std::size_t c) {
        for (std::size_t i = c * kChunkRows; i < std::min(n_, (c + 1) * kChunkRows); ++i) {
          min_d2[i] = std::min(min_d2[i],
                               squared_distance(points_, static_cast<Eigen::Index>(i), centroids_, jj));
        }
      });
    }
  }

  // Nearest centroid per point (lowest index on ties), via
  // ||x||^2 - 2 x.c + ||c||^2 in blocks; then exact distance to the winner.
  void assign() {
    const Eigen::VectorXd centroid_norms = centroids_.rowwise().squaredNorm();
    for_each_chunk(n_chunks_, threads_, [&](std::size_t c) {
      const std::size_t begin = c * kChunkRows;
      const std::size_t rows = std::min(n_, begin + kChunkRows) - begin;
      const auto block = points_.middleRows(static_cast<Eigen::Index>(begin),
                                            static_cast<Eigen::Index>(rows));
      const Eigen::MatrixXd cross = block * centroids_.transpose();
      for (std::size_t r = 0; r < rows; ++r) {
        const auto rr = static_cast<Eigen::Index>(r);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k_; ++j) {
          const auto jj = static_cast<Eigen::Index>(j);
          const double d = centroid_norms[jj] - 2.0 * cross(rr, jj);
          if (d < best_d) {
            best_d = d;
            best = j;
          }
        }
        const std::size_t i = begin + r;
        labels_[i] = best;
        d2_[i] = squared_distance(points_, static_cast<Eigen::Index>(i), centroids_,
                                  static_cast<Eigen::Index>(best));
      }
    });
  }

  // Each empty cluster takes the point farthest from its own centroid, drawn
  // from clusters that keep at least one member.
  void repair_empty() {
    std::vector<std::size_t> counts(k_, 0);
    for (const auto l : labels_) ++counts[l];
    for (std::size_t j = 0; j < k_; ++j) {
      if (counts[j] != 0) continue;
      std::size_t best = n_;
      double best_d = -1.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (counts[labels_[i]] > 1 && d2_[i] > best_d) {
          best_d = d2_[i];
          best = i;
        }
      }
      if (best == n_) throw InvariantError("k-means: no point available to reseed an empty cluster");
      --counts[labels_[best]];
      labels_[best] = j;
      counts[j] = 1;
      d2_[best] = 0.0;
      centroids_.row(static_cast<Eigen::Index>(j)) = points_.row(static_cast<Eigen::Index>(best));
    }
  }

  // Moves centroids to member means; returns the largest displacement.
  double update() {
    RowMatrix sums = RowMatrix::Zero(centroids_.rows(), centroids_.cols());
    std::vector<std::size_t> counts(k_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      sums.row(static_cast<Eigen::Index>(labels_[i])) += points_.row(static_cast<Eigen::Index>(i));
      ++counts[labels_[i]];
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < k_; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (counts[j] == 0) throw InvariantError("k-means: empty cluster after repair");
      const Eigen::RowVectorXd mean = sums.row(jj) / static_cast<double>(counts[j]);
      shift = std::max(shift, (mean - centroids_.row(jj)).norm());
      centroids_.row(jj) = mean;
    }
    return shift;
  }

  double inertia() const {
    std::vector<double> partial(n_chunks_, 0.0);
    for_each_chunk(n_chunks_, threads_, [&](std::size_t c) {
      double s = 0.0;
      for (std::size_t i = c * kChunkRows; i < std::min(n_, (c + 1) * kChunkRows); ++i) {
        s += squared_distance(points_, static_cast<Eigen::Index>(i), centroids_,
                              static_cast<Eigen::Index>(labels_[i]));
      }
      partial[c] = s;
    });
    return std::accumulate(partial.begin(), partial.end(), 0.0);
  }

  const RowMatrix& centroids() const { return centroids_; }
  const std::vector<std::size_t>& labels() const { return labels_; }

 private:
  std::size_t n_;
  std::size_t k_;
  std::size_t threads_;
  std::size_t n_chunks_;
  RowMatrix points_;
  RowMatrix centroids_;
  std::vector<std::size_t> labels_;
  std::vector<double> d2_;
};

}  // namespace

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(members.size());
  for (const auto& m : members) sizes.push_back(m.size());
  return sizes;
}

ClusterAssignment kmeans(const EmbeddingStore& store, std::span<const std::size_t> kept,
                         std::size_t num_clusters, std::uint64_t seed,
                         const KMeansOptions& options) {
  if (kept.empty()) throw InputError("k-means: empty sample set");
  if (num_clusters < 1) throw InputError("k-means: cluster count must be at least 1");
  if (num_clusters > kept.size()) {
    std::ostringstream msg;
    msg << "k-means: " << num_clusters << " clusters requested for " << kept.size() << " samples";
    throw InputError(msg.str());
  }
  for (const auto r : kept) {
    if (r >= store.count()) throw InputError("k-means: row index out of range");
  }

  Lloyd lloyd(store, kept, num_clusters, options);
  Rng rng(derive_seed(seed, kInitStream));
  lloyd.init_plus_plus(rng);

  ClusterAssignment out;
  out.num_clusters = num_clusters;
  const std::size_t max_iter = std::max<std::size_t>(1, options.max_iterations);
  for (std::size_t it = 0; it < max_iter; ++it) {
    lloyd.assign();
    lloyd.repair_empty();
    const double shift = lloyd.update();
    out.inertia_history.push_back(lloyd.inertia());
    out.iterations = it + 1;
    if (shift < options.tolerance) {
      out.converged = true;
      break;
    }
  }

  out.labels = lloyd.labels();
  out.centroids = lloyd.centroids();
  out.inertia = out.inertia_history.back();
  out.members.assign(num_clusters, {});
  for (std::size_t p = 0; p < kept.size(); ++p) out.members[out.labels[p]].push_back(kept[p]);
  for (auto& m : out.members) std::sort(m.begin(), m.end());
  return out;
}

ClusterGroups partition_by_size(std::span<const std::size_t> sizes, std::size_t num_groups) {
  if (num_groups < 1) throw InputError("partition: worker count must be at least 1");
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });

  ClusterGroups out;
  out.groups.assign(num_groups, {});
  std::vector<std::size_t> load(num_groups, 0);
  for (const auto cluster : order) {
    const auto g = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
    out.groups[g].push_back(cluster);
    load[g] += sizes[cluster];
  }
  for (auto& g : out.groups) std::sort(g.begin(), g.end());
  return out;
}

ClusterGroups partition_clusters(const ClusterAssignment& assignment, std::size_t num_groups) {
  const auto sizes = assignment.cluster_sizes();
  return partition_by_size(sizes, num_groups);
}

EmbeddingStore centroid_store(const ClusterAssignment& assignment) {
  const auto& c = assignment.centroids;
  std::vector<double> data(c.data(), c.data() + c.size());
  return EmbeddingStore(static_cast<std::size_t>(c.rows()), static_cast<std::size_t>(c.cols()),
                        std::move(data));
}

}  // namespace gainsel
