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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gainsel/datamodel.hpp"
#include "gainsel/pipeline.hpp"

namespace gainsel {

/// Per-benchmark accuracies (percent) of a subset-trained and a
/// full-set-trained model.
struct BenchmarkScores {
  std::vector<std::string> labels;
  std::vector<double> subset;
  std::vector<double> fullset;
};

/// (100 / |B|) * sum_i subset_i / fullset_i.
double avg_rel(const BenchmarkScores& scores);

/// Rows of "benchmark, subset, fullset". '#' starts a comment; a first row
/// whose numeric columns do not parse is taken as a header.
BenchmarkScores parse_benchmark_scores(std::istream& in);
BenchmarkScores load_benchmark_scores(const std::filesystem::path& path);

struct EntropySummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double exp_mean = 0.0;  // mean of exp(entropy) across seeds
};

struct DiversityReport {
  std::string strategy;
  std::vector<std::uint64_t> seeds;
  std::vector<double> strategy_entropy;  // nats, one per seed
  std::vector<double> random_entropy;
  EntropySummary strategy_summary;
  EntropySummary random_summary;
  double gain_ratio_percent = 0.0;  // on exp-scaled means, against random
};

/// Largest selected subset diversity_report will decompose exactly.
inline constexpr std::size_t kMaxReportSubset = 4096;

/// Runs `strategy` and uniform random selection for seeds config.seed,
/// config.seed + 1, ... and compares the von Neumann entropy of the whole
/// selected subsets.
DiversityReport diversity_report(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                                 Strategy strategy, const SelectionConfig& config,
                                 std::size_t n_seeds, const PipelineOptions& options = {});

EntropySummary summarize_entropies(std::span<const double> entropies);

/// CSV lines: a header then one row per seed, then a summary row.
std::string format_report_csv(const DiversityReport& report);

}  // namespace gainsel
