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

#include "gainsel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "gainsel/budget.hpp"
#include "gainsel/error.hpp"
#include "gainsel/filtering.hpp"
#include "gainsel/rng.hpp"

namespace gainsel {
namespace {

constexpr std::uint64_t kRandomStream = 0x72616e646f6dULL;
constexpr std::uint64_t kCcsStream = 0x636373ULL;

enum class Allocation { kProportional, kAverage };
enum class Criterion { kEntropy, kMmd };

// Holds either a reference to the caller's store or a normalized copy.
class StoreView {
 public:
  StoreView(const EmbeddingStore& store, bool normalize) {
    if (normalize) owned_ = store.l2_normalized();
    ref_ = owned_ ? &*owned_ : &store;
  }
  const EmbeddingStore& get() const { return *ref_; }

 private:
  std::optional<EmbeddingStore> owned_;
  const EmbeddingStore* ref_ = nullptr;
};

void prepare(const EmbeddingStore& store, std::span<const SampleMeta> metas,
             const SelectionConfig& config) {
  config.validate();
  check_alignment(store, metas);
}

void verify_manifest(const SelectionManifest& m) {
  std::unordered_set<std::size_t> seen;
  for (const auto& rec : m.selected) {
    if (!seen.insert(rec.row).second) throw InvariantError("selected rows are not unique");
  }
  std::size_t spent = 0;
  for (const auto& cl : m.per_cluster) spent += cl.rows.size();
  if (!m.per_cluster.empty() && spent != m.selected.size()) {
    throw InvariantError("selected count differs from per-cluster totals");
  }
}

// Runs fn(group) for every group on its own thread and rethrows the first
// failure in group order.
template <typename Fn>
void run_groups(std::size_t n_groups, Fn&& fn) {
  if (n_groups == 1) {
    fn(0);
    return;
  }
  std::vector<std::exception_ptr> errors(n_groups);
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
      pool.emplace_back([&, g] {
        try {
          fn(g);
        } catch (...) {
          errors[g] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SelectionManifest clustered_select(const EmbeddingStore& input, std::span<const SampleMeta> metas,
                                   const SelectionConfig& config, const PipelineOptions& options,
                                   Strategy strategy, Allocation allocation, Criterion criterion) {
  prepare(input, metas, config);
  const StoreView view(input, config.normalize);
  const EmbeddingStore& store = view.get();

  FilteredSet filtered;
  if (config.tail_low == 0.0 && config.tail_high == 0.0) {
    filtered.kept.resize(store.count());
    std::iota(filtered.kept.begin(), filtered.kept.end(), std::size_t{0});
  } else {
    filtered = filter_extremes(resolve_perplexities(metas), config.tail_low, config.tail_high);
  }
  const auto& kept = filtered.kept;
  if (config.budget > kept.size()) {
    std::ostringstream msg;
    msg << "budget " << config.budget << " exceeds the " << kept.size()
        << " samples left after filtering";
    throw InputError(msg.str());
  }
  if (config.clusters > kept.size()) {
    std::ostringstream msg;
    msg << config.clusters << " clusters requested for " << kept.size()
        << " samples left after filtering";
    throw InputError(msg.str());
  }

  KMeansOptions km = options.kmeans;
  km.threads = config.workers;
  const ClusterAssignment assignment = kmeans(store, kept, config.clusters, config.seed, km);
  const auto sizes = assignment.cluster_sizes();
  const BudgetPlan plan = allocation == Allocation::kProportional
                              ? allocate_budgets(sizes, config.budget)
                              : allocate_average(sizes, config.budget);
  const ClusterGroups groups = partition_by_size(sizes, config.workers);

  std::mutex progress_mutex;
  ProgressFn progress;
  if (options.progress) {
    progress = [&](std::size_t cluster, std::size_t step, double entropy) {
      std::lock_guard lock(progress_mutex);
      options.progress(cluster, step, entropy);
    };
  }

  std::vector<ClusterSampleResult> results(config.clusters);
  run_groups(groups.groups.size(), [&](std::size_t g) {
    for (const auto c : groups.groups[g]) {
      results[c].cluster = c;
      if (plan.per_cluster[c] == 0) continue;
      Rng rng(derive_seed(config.seed, c));
      results[c] = criterion == Criterion::kEntropy
                       ? greedy_sample_cluster(store, assignment.members[c], plan.per_cluster[c],
                                               config.candidates, config.sigma, rng, progress, c)
                       : mmd_sample_cluster(store, assignment.members[c], plan.per_cluster[c],
                                            config.candidates, config.sigma, rng, progress, c);
    }
  });

  SelectionManifest m;
  m.strategy = to_string(strategy);
  m.config = config;
  std::vector<std::size_t> removed = filtered.removed_low;
  removed.insert(removed.end(), filtered.removed_high.begin(), filtered.removed_high.end());
  std::sort(removed.begin(), removed.end());
  for (const auto r : removed) m.filtered_out.push_back(metas[r].id);

  for (std::size_t c = 0; c < config.clusters; ++c) {
    const auto& res = results[c];
    ClusterRecord cl;
    cl.cluster = c;
    cl.size = sizes[c];
    cl.budget = plan.per_cluster[c];
    cl.rows = res.selected;
    if (!res.entropy_trace.empty()) cl.final_entropy = res.entropy_trace.back();
    for (std::size_t k = 0; k < res.selected.size(); ++k) {
      m.selected.push_back(SelectedRecord{res.selected[k], metas[res.selected[k]].id,
                                          static_cast<std::int64_t>(c), k, res.entropy_trace[k]});
    }
    m.per_cluster.push_back(std::move(cl));
  }
  if (m.selected.size() != plan.total_allocated) {
    throw InvariantError("selection size differs from the allocated budget");
  }
  verify_manifest(m);
  return m;
}

std::vector<double> baseline_scores(std::span<const SampleMeta> metas, ScoreSource source) {
  if (source == ScoreSource::kPerplexity) return resolve_perplexities(metas);
  std::vector<double> scores;
  scores.reserve(metas.size());
  for (const auto& meta : metas) {
    if (!meta.score) throw InputError("sample '" + meta.id + "' has no score");
    scores.push_back(*meta.score);
  }
  return scores;
}

SelectionManifest flat_manifest(std::span<const SampleMeta> metas, const SelectionConfig& config,
                                Strategy strategy, std::vector<std::size_t> rows) {
  std::sort(rows.begin(), rows.end());
  SelectionManifest m;
  m.strategy = to_string(strategy);
  m.config = config;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    m.selected.push_back(SelectedRecord{rows[k], metas[rows[k]].id, -1, k, std::nullopt});
  }
  verify_manifest(m);
  return m;
}

SelectionManifest select_random(std::span<const SampleMeta> metas, const SelectionConfig& config) {
  const std::size_t n = metas.size();
  Rng rng(derive_seed(config.seed, kRandomStream));
  return flat_manifest(metas, config, Strategy::kRandom,
                       sample_without_replacement(n, std::min(config.budget, n), rng));
}

SelectionManifest select_mid_score(std::span<const SampleMeta> metas,
                                   const SelectionConfig& config) {
  const auto scores = baseline_scores(metas, config.score_source);
  const std::size_t n = scores.size();
  const std::size_t k = std::min(config.budget, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  const std::size_t start = (n - k) / 2;
  std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                order.begin() + static_cast<std::ptrdiff_t>(start + k));
  return flat_manifest(metas, config, Strategy::kMidScore, std::move(rows));
}

SelectionManifest select_ccs(std::span<const SampleMeta> metas, const SelectionConfig& config) {
  const auto scores = baseline_scores(metas, config.score_source);
  const std::size_t n = scores.size();
  const std::size_t k = std::min(config.budget, n);
  const std::size_t n_bins = config.bins;

  std::vector<std::vector<std::size_t>> bins(n_bins);
  if (n > 0) {
    const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    const double lo = *lo_it;
    const double width = (*hi_it - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t b = 0;
      if (width > 0.0) {
        b = static_cast<std::size_t>(std::floor((scores[i] - lo) / width));
        b = std::min(b, n_bins - 1);
      }
      bins[b].push_back(i);
    }
  }

  // Uniform quota; bins that run dry hand their share round-robin to the rest.
  std::vector<std::size_t> quota(n_bins, 0);
  std::size_t left = k;
  while (left > 0) {
    for (std::size_t b = 0; b < n_bins && left > 0; ++b) {
      if (quota[b] < bins[b].size()) {
        ++quota[b];
        --left;
      }
    }
  }

  Rng rng(derive_seed(config.seed, kCcsStream));
  SelectionManifest m;
  m.strategy = to_string(Strategy::kCcs);
  m.config = config;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (bins[b].empty()) continue;
    auto picks = sample_without_replacement(bins[b].size(), quota[b], rng);
    std::sort(picks.begin(), picks.end());
    ClusterRecord cl;
    cl.cluster = b;
    cl.size = bins[b].size();
    cl.budget = quota[b];
    for (std::size_t s = 0; s < picks.size(); ++s) {
      const std::size_t row = bins[b][picks[s]];
      cl.rows.push_back(row);
      m.selected.push_back(
          SelectedRecord{row, metas[row].id, static_cast<std::int64_t>(b), s, std::nullopt});
    }
    m.per_cluster.push_back(std::move(cl));
  }
  verify_manifest(m);
  return m;
}

}  // namespace

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kExam:
      return "exam";
    case Strategy::kRandom:
      return "random";
    case Strategy::kMidScore:
      return "mid_score";
    case Strategy::kCcs:
      return "ccs";
    case Strategy::kExamAverageAllocation:
      return "exam_average_allocation";
    case Strategy::kMmdMinimize:
      return "mmd_minimize";
  }
  return "exam";
}

Strategy parse_strategy(const std::string& name) {
  for (const auto s : {Strategy::kExam, Strategy::kRandom, Strategy::kMidScore, Strategy::kCcs,
                       Strategy::kExamAverageAllocation, Strategy::kMmdMinimize}) {
    if (to_string(s) == name) return s;
  }
  throw InputError("unknown strategy '" + name + "'");
}

SelectionManifest exam_select(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                              const SelectionConfig& config, const PipelineOptions& options) {
  return clustered_select(store, metas, config, options, Strategy::kExam,
                          Allocation::kProportional, Criterion::kEntropy);
}

SelectionManifest baseline_select(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                                  Strategy strategy, const SelectionConfig& config,
                                  const PipelineOptions& options) {
  switch (strategy) {
    case Strategy::kRandom:
      prepare(store, metas, config);
      return select_random(metas, config);
    case Strategy::kMidScore:
      prepare(store, metas, config);
      return select_mid_score(metas, config);
    case Strategy::kCcs:
      prepare(store, metas, config);
      return select_ccs(metas, config);
    case Strategy::kExamAverageAllocation:
      return clustered_select(store, metas, config, options, strategy, Allocation::kAverage,
                              Criterion::kEntropy);
    case Strategy::kMmdMinimize:
      return clustered_select(store, metas, config, options, strategy,
                              Allocation::kProportional, Criterion::kMmd);
    case Strategy::kExam:
      break;
  }
  throw InputError("'exam' is not a baseline strategy; use select");
}

SelectionManifest run_strategy(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                               Strategy strategy, const SelectionConfig& config,
                               const PipelineOptions& options) {
  if (strategy == Strategy::kExam) return exam_select(store, metas, config, options);
  return baseline_select(store, metas, strategy, config, options);
}

}  // namespace gainsel
