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

#include "gainsel/datamodel.hpp"

#include <cmath>
#include <sstream>

#include "gainsel/error.hpp"

namespace gainsel {

EmbeddingStore::EmbeddingStore(std::size_t count, std::size_t dim, std::vector<double> data)
    : count_(count), dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw InputError("embedding dimension must be positive");
  if (data_.size() != count_ * dim_) {
    std::ostringstream msg;
    msg << "embedding data has " << data_.size() << " values, expected " << count_ << " x "
        << dim_;
    throw InputError(msg.str());
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      std::ostringstream msg;
      msg << "non-finite embedding value at row " << i / dim_ << ", column " << i % dim_;
      throw InputError(msg.str());
    }
  }
}

EmbeddingStore EmbeddingStore::l2_normalized() const {
  std::vector<double> out = data_;
  for (std::size_t i = 0; i < count_; ++i) {
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) norm_sq += out[i * dim_ + k] * out[i * dim_ + k];
    if (norm_sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t k = 0; k < dim_; ++k) out[i * dim_ + k] *= inv;
  }
  return EmbeddingStore(count_, dim_, std::move(out));
}

std::string to_string(ScoreSource source) {
  switch (source) {
    case ScoreSource::kPerplexity:
      return "ppl";
    case ScoreSource::kScore:
      return "score";
  }
  return "ppl";
}

ScoreSource parse_score_source(const std::string& name) {
  if (name == "ppl") return ScoreSource::kPerplexity;
  if (name == "score") return ScoreSource::kScore;
  throw InputError("unknown score source '" + name + "' (expected ppl or score)");
}

void SelectionConfig::validate() const {
  if (budget < 1) throw InputError("budget must be at least 1");
  if (clusters < 1) throw InputError("cluster count must be at least 1");
  if (candidates < 1) throw InputError("candidate set size must be at least 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be positive");
  if (!(tail_low >= 0.0 && tail_low < 0.5) || !(tail_high >= 0.0 && tail_high < 0.5)) {
    throw InputError("tail fractions must lie in [0, 0.5)");
  }
  if (workers < 1) throw InputError("worker count must be at least 1");
  if (bins < 1) throw InputError("bin count must be at least 1");
}

std::vector<std::size_t> SelectionManifest::selected_rows() const {
  std::vector<std::size_t> rows;
  rows.reserve(selected.size());
  for (const auto& rec : selected) rows.push_back(rec.row);
  return rows;
}

std::vector<std::string> SelectionManifest::selected_ids() const {
  std::vector<std::string> ids;
  ids.reserve(selected.size());
  for (const auto& rec : selected) ids.push_back(rec.id);
  return ids;
}

void check_alignment(const EmbeddingStore& store, std::span<const SampleMeta> metas) {
  if (store.count() != metas.size()) {
    std::ostringstream msg;
    msg << "sample manifest has " << metas.size() << " records but embedding file has "
        << store.count() << " rows";
    throw InputError(msg.str());
  }
}

}  // namespace gainsel
