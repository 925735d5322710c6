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

#include "gainsel/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gainsel/error.hpp"

namespace gainsel {
namespace {

void check_row(const EmbeddingStore& store, std::size_t row) {
  if (row >= store.count()) {
    std::ostringstream msg;
    msg << "row index " << row << " out of range (store has " << store.count() << " rows)";
    throw InputError(msg.str());
  }
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be positive");
}

}  // namespace

double gaussian_similarity(std::span<const double> u, std::span<const double> v, double sigma) {
  if (u.size() != v.size()) throw InputError("gaussian_similarity: dimension mismatch");
  check_sigma(sigma);
  return gaussian_kernel(u.data(), v.data(), u.size(), 1.0 / (2.0 * sigma * sigma));
}

SimilarityState::SimilarityState(Eigen::MatrixXd matrix, std::vector<std::size_t> members)
    : matrix_(std::move(matrix)), members_(std::move(members)) {
  const auto n = static_cast<Eigen::Index>(members_.size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw InputError("similarity matrix shape does not match member count");
  }
}

bool SimilarityState::contains(std::size_t row) const {
  return std::find(members_.begin(), members_.end(), row) != members_.end();
}

SimilarityState build_similarity(const EmbeddingStore& store, std::span<const std::size_t> rows,
                                 double sigma) {
  if (rows.empty()) throw InputError("build_similarity: empty row set");
  check_sigma(sigma);
  for (const auto r : rows) check_row(store, r);

  const auto n = static_cast<Eigen::Index>(rows.size());
  const double inv = 1.0 / (2.0 * sigma * sigma);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    const double* ui = store.row(rows[i]).data();
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = gaussian_kernel(ui, store.row(rows[j]).data(), store.dim(), inv);
      m(i, j) = k;
      m(j, i) = k;
    }
  }
  return SimilarityState(std::move(m), std::vector<std::size_t>(rows.begin(), rows.end()));
}

SimilarityState augment(const SimilarityState& state, const EmbeddingStore& store,
                        std::size_t new_row, double sigma) {
  check_sigma(sigma);
  check_row(store, new_row);
  if (state.contains(new_row)) {
    std::ostringstream msg;
    msg << "augment: row " << new_row << " is already a member";
    throw InputError(msg.str());
  }
  const auto t = static_cast<Eigen::Index>(state.size());
  const double inv = 1.0 / (2.0 * sigma * sigma);
  Eigen::MatrixXd m(t + 1, t + 1);
  m.topLeftCorner(t, t) = state.matrix();
  const double* u = store.row(new_row).data();
  for (Eigen::Index j = 0; j < t; ++j) {
    const double k = gaussian_kernel(store.row(state.members()[j]).data(), u, store.dim(), inv);
    m(t, j) = k;
    m(j, t) = k;
  }
  m(t, t) = 1.0;
  auto members = state.members();
  members.push_back(new_row);
  return SimilarityState(std::move(m), std::move(members));
}

double EntropyEvaluator::operator()(const Eigen::MatrixXd& similarity) {
  const auto n = similarity.rows();
  if (n <= 1) return 0.0;
  const double trace = similarity.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) {
    throw InvariantError("similarity matrix has non-positive or non-finite trace");
  }
  scratch_ = similarity / trace;
  solver_.compute(scratch_, Eigen::EigenvaluesOnly);
  if (solver_.info() != Eigen::Success) throw InvariantError("eigendecomposition failed");

  double entropy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = solver_.eigenvalues()[i];
    if (!std::isfinite(lambda)) throw InvariantError("non-finite eigenvalue in similarity state");
    if (lambda < kEigenvalueFloor) continue;
    entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

double von_neumann_entropy(const Eigen::MatrixXd& similarity) {
  EntropyEvaluator eval;
  return eval(similarity);
}

double von_neumann_entropy(const SimilarityState& state) {
  return von_neumann_entropy(state.matrix());
}

double entropy_gain(const SimilarityState& state, const EmbeddingStore& store,
                    std::size_t candidate_row, double sigma) {
  const auto next = augment(state, store, candidate_row, sigma);
  EntropyEvaluator eval;
  return eval(next.matrix()) - eval(state.matrix());
}

double subset_entropy(const EmbeddingStore& store, std::span<const std::size_t> rows,
                      double sigma) {
  if (rows.size() <= 1) return 0.0;
  return von_neumann_entropy(build_similarity(store, rows, sigma));
}

}  // namespace gainsel
