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

#include <span>
#include <string>

#include "gainsel/clustering.hpp"
#include "gainsel/datamodel.hpp"
#include "gainsel/sampler.hpp"

namespace gainsel {

enum class Strategy { kExam, kRandom, kMidScore, kCcs, kExamAverageAllocation, kMmdMinimize };

std::string to_string(Strategy strategy);
Strategy parse_strategy(const std::string& name);

struct PipelineOptions {
  ProgressFn progress;  // called from worker threads, serialized by the pipeline
  KMeansOptions kmeans;  // threads is overridden by config.workers
};

/// Full pipeline: PPL tail filtering, k-means over the kept samples,
/// proportional budget allocation, LPT grouping of clusters onto
/// config.workers threads, greedy entropy-gain sampling per cluster.
/// Every cluster draws from its own stream derive_seed(seed, cluster), and
/// results are merged by cluster id, so the manifest does not depend on the
/// worker count.
SelectionManifest exam_select(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                              const SelectionConfig& config, const PipelineOptions& options = {});

/// Comparison strategies. random, mid_score and ccs run on the whole dataset
/// without PPL filtering; exam_average_allocation and mmd_minimize reuse the
/// filtered, clustered pipeline and change only allocation or the
/// intra-cluster criterion.
SelectionManifest baseline_select(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                                  Strategy strategy, const SelectionConfig& config,
                                  const PipelineOptions& options = {});

/// Dispatches to exam_select or baseline_select.
SelectionManifest run_strategy(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                               Strategy strategy, const SelectionConfig& config,
                               const PipelineOptions& options = {});

}  // namespace gainsel
