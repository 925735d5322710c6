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

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "gainsel/datamodel.hpp"

namespace gainsel {

/// Eigenvalues of the trace-normalized matrix below this are treated as zero.
inline constexpr double kEigenvalueFloor = 1e-12;

/// exp(-||u - v||^2 / (2 sigma^2)).
double gaussian_similarity(std::span<const double> u, std::span<const double> v, double sigma);

/// Unchecked kernel for hot loops: no dimension or sigma validation.
inline double gaussian_kernel(const double* u, const double* v, std::size_t dim,
                              double inv_two_sigma_sq) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = u[k] - v[k];
    d2 += diff * diff;
  }
  return std::exp(-d2 * inv_two_sigma_sq);
}

/// Gaussian-kernel matrix over a set of store rows. The value is immutable;
/// augment returns a new state.
class SimilarityState {
 public:
  SimilarityState() = default;
  SimilarityState(Eigen::MatrixXd matrix, std::vector<std::size_t> members);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::vector<std::size_t>& members() const { return members_; }
  bool contains(std::size_t row) const;

 private:
  Eigen::MatrixXd matrix_;
  std::vector<std::size_t> members_;
};

SimilarityState build_similarity(const EmbeddingStore& store, std::span<const std::size_t> rows,
                                 double sigma);

/// Returns [[M, s], [s^T, 1]] with s the kernel vector of new_row against the
/// current members. Throws InputError if new_row is already a member.
SimilarityState augment(const SimilarityState& state, const EmbeddingStore& store,
                        std::size_t new_row, double sigma);

/// Von Neumann entropy, in nats, of a symmetric PSD similarity matrix after
/// dividing by its trace. Reuses solver storage across calls, so an
/// evaluator must not be shared between threads.
class EntropyEvaluator {
 public:
  double operator()(const Eigen::MatrixXd& similarity);

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
  Eigen::MatrixXd scratch_;
};

double von_neumann_entropy(const Eigen::MatrixXd& similarity);
double von_neumann_entropy(const SimilarityState& state);

/// E(augment(state, candidate)) - E(state).
double entropy_gain(const SimilarityState& state, const EmbeddingStore& store,
                    std::size_t candidate_row, double sigma);

/// Entropy of an arbitrary row set, built from scratch.
double subset_entropy(const EmbeddingStore& store, std::span<const std::size_t> rows,
                      double sigma);

}  // namespace gainsel
