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

#include "gainsel/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gainsel/entropy.hpp"
#include "gainsel/error.hpp"

namespace gainsel {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double avg_rel(const BenchmarkScores& scores) {
  const std::size_t n = scores.subset.size();
  if (n == 0) throw InputError("avg-rel: no benchmarks");
  if (scores.fullset.size() != n || (!scores.labels.empty() && scores.labels.size() != n)) {
    throw InputError("avg-rel: subset and full-set score lists differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(scores.subset[i]) || !std::isfinite(scores.fullset[i])) {
      throw InputError("avg-rel: scores must be finite");
    }
    if (scores.fullset[i] <= 0.0) throw InputError("avg-rel: full-set scores must be positive");
    sum += scores.subset[i] / scores.fullset[i];
  }
  return 100.0 * sum / static_cast<double>(n);
}

BenchmarkScores parse_benchmark_scores(std::istream& in) {
  BenchmarkScores out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    std::ostringstream where;
    where << "scores line " << line_no << ": ";
    if (fields.size() != 3) throw InputError(where.str() + "expected 'benchmark, subset, fullset'");

    double subset = 0.0;
    double fullset = 0.0;
    if (!parse_double(fields[1], subset) || !parse_double(fields[2], fullset)) {
      if (!seen_row) {
        seen_row = true;  // header
        continue;
      }
      throw InputError(where.str() + "scores are not numbers");
    }
    seen_row = true;
    if (!std::isfinite(subset) || !std::isfinite(fullset)) {
      throw InputError(where.str() + "scores must be finite");
    }
    if (fullset <= 0.0) throw InputError(where.str() + "full-set score must be positive");
    out.labels.push_back(fields[0]);
    out.subset.push_back(subset);
    out.fullset.push_back(fullset);
  }
  return out;
}

BenchmarkScores load_benchmark_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("'" + path.string() + "': cannot open scores file");
  return parse_benchmark_scores(in);
}

EntropySummary summarize_entropies(std::span<const double> entropies) {
  if (entropies.empty()) throw InputError("no entropies to summarize");
  EntropySummary s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double exp_sum = 0.0;
  for (const double e : entropies) {
    sum += e;
    exp_sum += std::exp(e);
    s.min = std::min(s.min, e);
    s.max = std::max(s.max, e);
  }
  const auto n = static_cast<double>(entropies.size());
  s.mean = sum / n;
  s.exp_mean = exp_sum / n;
  return s;
}

DiversityReport diversity_report(const EmbeddingStore& store, std::span<const SampleMeta> metas,
                                 Strategy strategy, const SelectionConfig& config,
                                 std::size_t n_seeds, const PipelineOptions& options) {
  if (n_seeds < 1) throw InputError("diagnose: need at least one seed");
  const EmbeddingStore normalized = config.normalize ? store.l2_normalized() : EmbeddingStore{};
  const EmbeddingStore& kernel_store = config.normalize ? normalized : store;

  auto entropy_of = [&](const SelectionManifest& m) {
    const auto rows = m.selected_rows();
    if (rows.size() > kMaxReportSubset) {
      std::ostringstream msg;
      msg << "diagnose: subset of " << rows.size() << " exceeds the exact-entropy limit of "
          << kMaxReportSubset;
      throw InputError(msg.str());
    }
    return subset_entropy(kernel_store, rows, config.sigma);
  };

  DiversityReport report;
  report.strategy = to_string(strategy);
  for (std::size_t s = 0; s < n_seeds; ++s) {
    SelectionConfig cfg = config;
    cfg.seed = config.seed + s;
    report.seeds.push_back(cfg.seed);
    report.strategy_entropy.push_back(entropy_of(run_strategy(store, metas, strategy, cfg, options)));
    report.random_entropy.push_back(
        entropy_of(run_strategy(store, metas, Strategy::kRandom, cfg, options)));
  }
  report.strategy_summary = summarize_entropies(report.strategy_entropy);
  report.random_summary = summarize_entropies(report.random_entropy);
  report.gain_ratio_percent = (report.strategy_summary.exp_mean - report.random_summary.exp_mean) /
                              report.random_summary.exp_mean * 100.0;
  return report;
}

std::string format_report_csv(const DiversityReport& report) {
  std::ostringstream out;
  out << "strategy,seed,entropy_nats,exp_entropy,random_entropy_nats,random_exp_entropy\n";
  for (std::size_t i = 0; i < report.seeds.size(); ++i) {
    out << report.strategy << ',' << report.seeds[i] << ','
        << format_number(report.strategy_entropy[i]) << ','
        << format_number(std::exp(report.strategy_entropy[i])) << ','
        << format_number(report.random_entropy[i]) << ','
        << format_number(std::exp(report.random_entropy[i])) << '\n';
  }
  const auto& s = report.strategy_summary;
  const auto& r = report.random_summary;
  out << "\nmetric,strategy,random\n";
  out << "mean_nats," << format_number(s.mean) << ',' << format_number(r.mean) << '\n';
  out << "min_nats," << format_number(s.min) << ',' << format_number(r.min) << '\n';
  out << "max_nats," << format_number(s.max) << ',' << format_number(r.max) << '\n';
  out << "mean_exp_entropy," << format_number(s.exp_mean) << ',' << format_number(r.exp_mean)
      << '\n';
  out << "gain_ratio_percent," << format_number(report.gain_ratio_percent) << ",0\n";
  return out.str();
}

}  // namespace gainsel
