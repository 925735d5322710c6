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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "gainsel/entropy.hpp"
#include "gainsel/error.hpp"
#include "gainsel/manifest.hpp"
#include "gainsel/pipeline.hpp"
#include "gainsel/synthetic.hpp"

namespace gainsel {
namespace {

SelectionConfig small_config(std::size_t budget) {
  SelectionConfig c;
  c.budget = budget;
  c.clusters = 6;
  c.candidates = 20;
  c.seed = 11;
  return c;
}

void expect_unique_rows(const SelectionManifest& m) {
  const auto rows = m.selected_rows();
  std::set<std::size_t> uniq(rows.begin(), rows.end());
  EXPECT_EQ(uniq.size(), rows.size());
}

TEST(ExamSelect, SelectsEverythingKeptWhenBudgetIsFull) {
  const auto d = gen_synthetic(200, 4, 5, 0.5, 2);
  const auto m = exam_select(d.store, d.metas, small_config(180));
  EXPECT_EQ(m.filtered_out.size(), 20u);
  EXPECT_EQ(m.selected.size(), 180u);
  std::set<std::string> chosen;
  for (const auto& r : m.selected) chosen.insert(r.id);
  for (const auto& id : m.filtered_out) EXPECT_EQ(chosen.count(id), 0u);
  expect_unique_rows(m);
}

TEST(ExamSelect, ManifestIsConsistent) {
  const auto d = gen_synthetic(400, 5, 8, 0.4, 3);
  const auto cfg = small_config(37);
  const auto m = exam_select(d.store, d.metas, cfg);
  EXPECT_EQ(m.strategy, "exam");
  EXPECT_EQ(m.selected.size(), 37u);
  std::size_t total = 0;
  std::size_t sizes = 0;
  for (const auto& c : m.per_cluster) {
    EXPECT_EQ(c.rows.size(), std::min(c.budget, c.size));
    EXPECT_GE(c.budget, 1u);
    total += c.rows.size();
    sizes += c.size;
    if (c.rows.size() >= 1) {
      ASSERT_TRUE(c.final_entropy.has_value());
      EXPECT_NEAR(*c.final_entropy, subset_entropy(d.store, c.rows, cfg.sigma), 1e-9);
    }
  }
  EXPECT_EQ(total, 37u);
  EXPECT_EQ(sizes, 400u - m.filtered_out.size());
  for (const auto& r : m.selected) {
    EXPECT_EQ(d.metas[r.row].id, r.id);
    EXPECT_GE(r.cluster, 0);
  }
  expect_unique_rows(m);
}

TEST(ExamSelect, WorkerCountDoesNotChangeOutput) {
  const auto d = gen_synthetic(500, 6, 7, 0.4, 5);
  auto cfg = small_config(60);
  const auto base = serialize_manifest(exam_select(d.store, d.metas, cfg));
  for (const std::size_t g : {2u, 4u, 8u}) {
    cfg.workers = g;
    EXPECT_EQ(serialize_manifest(exam_select(d.store, d.metas, cfg)), base) << "G=" << g;
  }
  cfg.workers = 1;
  EXPECT_EQ(serialize_manifest(exam_select(d.store, d.metas, cfg)), base);
}

TEST(ExamSelect, ProgressReportsEveryStep) {
  const auto d = gen_synthetic(150, 3, 3, 0.5, 9);
  std::mutex mu;
  std::size_t events = 0;
  PipelineOptions opts;
  opts.progress = [&](std::size_t, std::size_t, double e) {
    std::lock_guard lock(mu);
    EXPECT_TRUE(std::isfinite(e));
    ++events;
  };
  auto cfg = small_config(25);
  cfg.workers = 3;
  exam_select(d.store, d.metas, cfg, opts);
  EXPECT_EQ(events, 25u);
}

TEST(ExamSelect, BeatsRandomOnDiversity) {
  const auto d = gen_synthetic(1000, 8, 10, 0.15, 1);
  SelectionConfig cfg;
  cfg.budget = 100;
  cfg.clusters = 10;
  cfg.candidates = 100;
  double exam_mean = 0.0;
  double random_mean = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.seed = s;
    exam_mean += subset_entropy(d.store, exam_select(d.store, d.metas, cfg).selected_rows(), 0.5);
    random_mean += subset_entropy(
        d.store, baseline_select(d.store, d.metas, Strategy::kRandom, cfg).selected_rows(), 0.5);
  }
  EXPECT_GT(exam_mean, random_mean);
}

TEST(ExamSelect, Errors) {
  const auto d = gen_synthetic(50, 2, 2, 0.5, 1);
  EXPECT_THROW(exam_select(d.store, d.metas, small_config(47)), InputError);
  auto cfg = small_config(5);
  cfg.clusters = 47;
  EXPECT_THROW(exam_select(d.store, d.metas, cfg), InputError);
  cfg = small_config(5);
  cfg.sigma = 0.0;
  EXPECT_THROW(exam_select(d.store, d.metas, cfg), InputError);
  std::vector<SampleMeta> short_metas(d.metas.begin(), d.metas.begin() + 10);
  EXPECT_THROW(exam_select(d.store, short_metas, small_config(5)), InputError);
}

TEST(ExamSelect, NormalizationUsesUnitVectors) {
  const auto d = gen_synthetic(120, 3, 4, 0.5, 4);
  auto cfg = small_config(20);
  cfg.normalize = true;
  const auto m = exam_select(d.store, d.metas, cfg);
  EXPECT_EQ(m.selected.size(), 20u);
  const auto unit = d.store.l2_normalized();
  for (const auto& c : m.per_cluster) {
    if (c.final_entropy) {
      EXPECT_NEAR(*c.final_entropy, subset_entropy(unit, c.rows, cfg.sigma), 1e-9);
    }
  }
}

TEST(Baselines, RandomWithFullBudgetTakesAll) {
  const auto d = gen_synthetic(30, 2, 2, 0.5, 1);
  auto cfg = small_config(30);
  const auto m = baseline_select(d.store, d.metas, Strategy::kRandom, cfg);
  std::vector<std::size_t> all(30);
  std::iota(all.begin(), all.end(), std::size_t{0});
  EXPECT_EQ(m.selected_rows(), all);
  cfg.budget = 45;
  EXPECT_EQ(baseline_select(d.store, d.metas, Strategy::kRandom, cfg).selected.size(), 30u);
}

std::vector<SampleMeta> scored(const std::vector<double>& scores) {
  std::vector<SampleMeta> metas;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    SampleMeta m;
    m.id = "x" + std::to_string(i);
    m.score = scores[i];
    m.ppl = 1.0 + static_cast<double>(i);
    metas.push_back(m);
  }
  return metas;
}

TEST(Baselines, MidScoreTakesMedianRanks) {
  std::vector<double> scores(100);
  std::iota(scores.begin(), scores.end(), 1.0);
  std::reverse(scores.begin(), scores.end());
  const auto metas = scored(scores);
  const auto d = gen_synthetic(100, 2, 1, 1.0, 0);
  auto cfg = small_config(2);
  cfg.score_source = ScoreSource::kScore;
  const auto m = baseline_select(d.store, metas, Strategy::kMidScore, cfg);
  std::vector<double> picked;
  for (const auto r : m.selected_rows()) picked.push_back(*metas[r].score);
  std::sort(picked.begin(), picked.end());
  EXPECT_EQ(picked, (std::vector<double>{50.0, 51.0}));
}

TEST(Baselines, CcsTakesOnePerBin) {
  const auto d = gen_synthetic(2000, 2, 1, 1.0, 0);
  Rng rng(77);
  std::vector<double> scores(2000);
  for (auto& s : scores) s = rng.uniform();
  scores[0] = 0.0;
  scores[1] = 1.0;
  const auto metas = scored(scores);
  auto cfg = small_config(50);
  cfg.score_source = ScoreSource::kScore;
  const auto m = baseline_select(d.store, metas, Strategy::kCcs, cfg);
  ASSERT_EQ(m.selected.size(), 50u);
  // Independent bin assignment: count how many bins the picks fall into.
  auto bin_of = [](double s) {
    std::size_t b = 0;
    while (b + 1 < 50 && s >= static_cast<double>(b + 1) / 50.0) ++b;
    return b;
  };
  std::vector<std::size_t> per_bin(50, 0);
  for (const auto r : m.selected_rows()) ++per_bin[bin_of(scores[r])];
  for (std::size_t b = 0; b < 50; ++b) EXPECT_EQ(per_bin[b], 1u) << "bin " << b;
}

TEST(Baselines, CcsRedistributesDeficit) {
  // Two crowded bins at the ends, nothing in between.
  std::vector<double> scores;
  for (int i = 0; i < 10; ++i) scores.push_back(0.0);
  for (int i = 0; i < 3; ++i) scores.push_back(1.0);
  const auto metas = scored(scores);
  const auto d = gen_synthetic(13, 2, 1, 1.0, 0);
  auto cfg = small_config(8);
  cfg.score_source = ScoreSource::kScore;
  cfg.bins = 4;
  const auto m = baseline_select(d.store, metas, Strategy::kCcs, cfg);
  std::size_t high = 0;
  for (const auto r : m.selected_rows()) high += scores[r] == 1.0;
  EXPECT_EQ(m.selected.size(), 8u);
  EXPECT_EQ(high, 3u);
  expect_unique_rows(m);
}

TEST(Baselines, MissingScoresAreRejected) {
  const auto d = gen_synthetic(10, 2, 1, 1.0, 0);
  auto cfg = small_config(3);
  cfg.score_source = ScoreSource::kScore;
  auto metas = d.metas;
  for (auto& m : metas) m.score.reset();
  EXPECT_THROW(baseline_select(d.store, metas, Strategy::kMidScore, cfg), InputError);
  EXPECT_THROW(baseline_select(d.store, metas, Strategy::kCcs, cfg), InputError);
  EXPECT_THROW(parse_strategy("coreset"), InputError);
  EXPECT_THROW(baseline_select(d.store, d.metas, Strategy::kExam, cfg), InputError);
}

TEST(Baselines, EveryStrategySelectsRequestedCount) {
  const auto d = gen_synthetic(300, 4, 5, 0.4, 12);
  for (const auto s : {Strategy::kExam, Strategy::kRandom, Strategy::kMidScore, Strategy::kCcs,
                       Strategy::kExamAverageAllocation, Strategy::kMmdMinimize}) {
    auto cfg = small_config(41);
    const auto m = run_strategy(d.store, d.metas, s, cfg);
    EXPECT_EQ(m.selected.size(), 41u) << to_string(s);
    EXPECT_EQ(m.strategy, to_string(s));
    EXPECT_EQ(parse_strategy(to_string(s)), s);
    expect_unique_rows(m);
    cfg.workers = 4;
    EXPECT_EQ(serialize_manifest(run_strategy(d.store, d.metas, s, cfg)), serialize_manifest(m));
  }
}

TEST(Baselines, AverageAllocationSplitsEqually) {
  const auto d = gen_synthetic(300, 4, 3, 0.4, 12);
  auto cfg = small_config(30);
  cfg.clusters = 3;
  const auto m = run_strategy(d.store, d.metas, Strategy::kExamAverageAllocation, cfg);
  for (const auto& c : m.per_cluster) EXPECT_EQ(c.budget, 10u);
}

}  // namespace
}  // namespace gainsel
