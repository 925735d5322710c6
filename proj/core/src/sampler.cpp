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

#include "gainsel/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gainsel/entropy.hpp"
#include "gainsel/error.hpp"

namespace gainsel {
namespace {

void check_inputs(const EmbeddingStore& store, std::span<const std::size_t> members,
                  std::size_t budget, std::size_t candidates, double sigma) {
  if (budget < 1) throw InputError("cluster budget must be at least 1");
  if (members.empty()) throw InputError("cluster has no members");
  if (candidates < 1) throw InputError("candidate set size must be at least 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be positive");
  for (const auto r : members) {
    if (r >= store.count()) throw InputError("cluster member row out of range");
  }
}

// Shuffles the first k positions of `pool` into a uniform k-sample.
void draw_front(std::vector<std::size_t>& pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

// Growing Gaussian-kernel matrix with a spare row and column for trials.
class GrowingKernel {
 public:
  GrowingKernel(const EmbeddingStore& store, double sigma)
      : store_(store), inv_(1.0 / (2.0 * sigma * sigma)) {}

  // Writes the kernel vector of `row` against current members into the
  // trial slot and returns the trial matrix.
  const Eigen::MatrixXd& trial(std::size_t row) {
    const auto t = static_cast<Eigen::Index>(rows_.size());
    const double* u = store_.row(row).data();
    for (Eigen::Index j = 0; j < t; ++j) {
      const double k = gaussian_kernel(store_.row(rows_[j]).data(), u, store_.dim(), inv_);
      trial_(t, j) = k;
      trial_(j, t) = k;
    }
    trial_(t, t) = 1.0;
    return trial_;
  }

  void accept(std::size_t row) {
    trial(row);
    rows_.push_back(row);
    const auto t = static_cast<Eigen::Index>(rows_.size());
    current_ = trial_;
    trial_.resize(t + 1, t + 1);
    trial_.topLeftCorner(t, t) = current_;
  }

  const Eigen::MatrixXd& current() const { return current_; }

  double kernel(std::size_t a, std::size_t b) const {
    return gaussian_kernel(store_.row(a).data(), store_.row(b).data(), store_.dim(), inv_);
  }

 private:
  const EmbeddingStore& store_;
  double inv_;
  std::vector<std::size_t> rows_;
  Eigen::MatrixXd current_;
  Eigen::MatrixXd trial_ = Eigen::MatrixXd(1, 1);
};

ClusterSampleResult take_all(const EmbeddingStore& store, std::span<const std::size_t> members,
                             double sigma, const ProgressFn& progress, std::size_t cluster_id) {
  ClusterSampleResult out;
  out.cluster = cluster_id;
  out.selected.assign(members.begin(), members.end());
  std::sort(out.selected.begin(), out.selected.end());
  GrowingKernel kernel(store, sigma);
  EntropyEvaluator entropy;
  for (const auto row : out.selected) {
    kernel.accept(row);
    out.entropy_trace.push_back(entropy(kernel.current()));
    if (progress) progress(cluster_id, out.entropy_trace.size() - 1, out.entropy_trace.back());
  }
  return out;
}

}  // namespace

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw InputError("cannot draw more samples than available");
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  draw_front(pool, k, rng);
  pool.resize(k);
  return pool;
}

ClusterSampleResult greedy_sample_cluster(const EmbeddingStore& store,
                                          std::span<const std::size_t> members,
                                          std::size_t budget, std::size_t candidates,
                                          double sigma, Rng& rng, const ProgressFn& progress,
                                          std::size_t cluster_id) {
  check_inputs(store, members, budget, candidates, sigma);
  if (budget >= members.size()) return take_all(store, members, sigma, progress, cluster_id);

  ClusterSampleResult out;
  out.cluster = cluster_id;
  std::vector<std::size_t> pool(members.begin(), members.end());
  std::sort(pool.begin(), pool.end());
  if (std::adjacent_find(pool.begin(), pool.end()) != pool.end()) {
    throw InputError("cluster members must be distinct");
  }

  const std::size_t n_seed = std::min<std::size_t>(2, budget);
  draw_front(pool, n_seed, rng);
  out.initial_pair.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_seed));
  std::vector<std::size_t> remaining(pool.begin() + static_cast<std::ptrdiff_t>(n_seed), pool.end());

  GrowingKernel kernel(store, sigma);
  EntropyEvaluator entropy;
  for (const auto row : out.initial_pair) {
    kernel.accept(row);
    out.selected.push_back(row);
    out.entropy_trace.push_back(entropy(kernel.current()));
    if (progress) progress(cluster_id, out.selected.size() - 1, out.entropy_trace.back());
  }

  while (out.selected.size() < budget) {
    const std::size_t n_cand = std::min(candidates, remaining.size());
    draw_front(remaining, n_cand, rng);

    // argmax of E(G + {z}); E(G) is common to every candidate.
    std::size_t best = 0;
    double best_entropy = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < n_cand; ++q) {
      const double e = entropy(kernel.trial(remaining[q]));
      if (e > best_entropy || (e == best_entropy && remaining[q] < remaining[best])) {
        best_entropy = e;
        best = q;
      }
    }

    const std::size_t row = remaining[best];
    kernel.accept(row);
    out.selected.push_back(row);
    out.entropy_trace.push_back(best_entropy);
    if (progress) progress(cluster_id, out.selected.size() - 1, best_entropy);
    remaining[best] = remaining.back();
    remaining.pop_back();
  }
  return out;
}

ClusterSampleResult mmd_sample_cluster(const EmbeddingStore& store,
                                       std::span<const std::size_t> members,
                                       std::size_t budget, std::size_t candidates, double sigma,
                                       Rng& rng, const ProgressFn& progress,
                                       std::size_t cluster_id) {
  check_inputs(store, members, budget, candidates, sigma);
  if (budget >= members.size()) return take_all(store, members, sigma, progress, cluster_id);

  std::vector<std::size_t> remaining(members.begin(), members.end());
  std::sort(remaining.begin(), remaining.end());
  const std::size_t n = remaining.size();

  GrowingKernel kernel(store, sigma);
  // Mean kernel of each member against the whole cluster.
  std::vector<double> cluster_mean(n, 0.0);
  {
    std::vector<double> sums(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      sums[a] += 1.0;
      for (std::size_t b = 0; b < a; ++b) {
        const double k = kernel.kernel(remaining[a], remaining[b]);
        sums[a] += k;
        sums[b] += k;
      }
    }
    for (std::size_t a = 0; a < n; ++a) cluster_mean[a] = sums[a] / static_cast<double>(n);
  }
  // remaining is sorted here, so the mean for a row is found by binary search.
  const std::vector<std::size_t> sorted_rows = remaining;
  auto mean_of = [&](std::size_t row) {
    const auto it = std::lower_bound(sorted_rows.begin(), sorted_rows.end(), row);
    return cluster_mean[static_cast<std::size_t>(it - sorted_rows.begin())];
  };

  ClusterSampleResult out;
  out.cluster = cluster_id;
  EntropyEvaluator entropy;
  double pair_sum = 0.0;   // sum_{i,j in S} k(i,j), diagonal included
  double cross_sum = 0.0;  // sum_{i in S} mean_{j in C} k(i,j)
  while (out.selected.size() < budget) {
    const double t1 = static_cast<double>(out.selected.size() + 1);
    const std::size_t n_cand = std::min(candidates, remaining.size());
    draw_front(remaining, n_cand, rng);

    std::size_t best = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    double best_pair = 0.0;
    for (std::size_t q = 0; q < n_cand; ++q) {
      const std::size_t row = remaining[q];
      double with_set = 0.0;
      for (const auto s : out.selected) with_set += kernel.kernel(row, s);
      const double pair = pair_sum + 2.0 * with_set + 1.0;
      const double obj = pair / (t1 * t1) - 2.0 * (cross_sum + mean_of(row)) / t1;
      if (obj < best_obj || (obj == best_obj && row < remaining[best])) {
        best_obj = obj;
        best = q;
        best_pair = pair;
      }
    }

    const std::size_t row = remaining[best];
    pair_sum = best_pair;
    cross_sum += mean_of(row);
    kernel.accept(row);
    out.selected.push_back(row);
    out.entropy_trace.push_back(entropy(kernel.current()));
    if (progress) progress(cluster_id, out.selected.size() - 1, out.entropy_trace.back());
    remaining[best] = remaining.back();
    remaining.pop_back();
  }
  return out;
}

}  // namespace gainsel
