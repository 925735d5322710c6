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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gainsel {

/// Dense row-major matrix of per-sample embeddings. Values are held as
/// doubles; the on-disk format is float32, so loaded stores are always
/// exactly representable in single precision.
///
/// Immutable after construction and safe to share across threads.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  /// Throws InputError when dim == 0, data.size() != count * dim, or any value
  /// is non-finite.
  EmbeddingStore(std::size_t count, std::size_t dim, std::vector<double> data);

  std::size_t count() const { return count_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const double> data() const { return data_; }

  /// Copy with every row scaled to unit L2 norm (zero rows are left as is).
  EmbeddingStore l2_normalized() const;

  friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct SampleMeta {
  std::string id;
  std::optional<std::vector<double>> nlls;  // per-token negative log-likelihoods
  std::optional<double> ppl;
  std::optional<double> score;

  friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

/// Which per-sample value score-based baselines rank by.
enum class ScoreSource { kPerplexity, kScore };

std::string to_string(ScoreSource source);
ScoreSource parse_score_source(const std::string& name);

struct SelectionConfig {
  std::size_t budget = 1;
  std::size_t clusters = 1000;
  std::size_t candidates = 100;
  double sigma = 0.5;
  double tail_low = 0.05;
  double tail_high = 0.05;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  std::size_t bins = 50;
  ScoreSource score_source = ScoreSource::kPerplexity;
  bool normalize = false;

  /// Throws InputError describing the first violated constraint.
  void validate() const;
};

/// Per-sample record of a selection run, in manifest order.
struct SelectedRecord {
  std::size_t row = 0;
  std::string id;
  std::int64_t cluster = -1;  // -1 for strategies without clusters
  std::size_t step = 0;       // position within the cluster's selection
  std::optional<double> entropy;  // set entropy after this step, in nats
};

struct ClusterRecord {
  std::size_t cluster = 0;
  std::size_t size = 0;
  std::size_t budget = 0;
  std::vector<std::size_t> rows;  // selected rows, in selection order
  std::optional<double> final_entropy;
};

struct SelectionManifest {
  std::string strategy;
  SelectionConfig config;
  std::vector<std::string> filtered_out;
  std::vector<ClusterRecord> per_cluster;
  std::vector<SelectedRecord> selected;

  std::vector<std::size_t> selected_rows() const;
  std::vector<std::string> selected_ids() const;
};

/// Throws InputError unless metas and store describe the same number of samples.
void check_alignment(const EmbeddingStore& store, std::span<const SampleMeta> metas);

}  // namespace gainsel
