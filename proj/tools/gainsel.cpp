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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#ifdef GAINSEL_SYSTEM_CLI11
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "gainsel/error.hpp"
#include "gainsel/io.hpp"
#include "gainsel/manifest.hpp"
#include "gainsel/metrics.hpp"
#include "gainsel/pipeline.hpp"
#include "gainsel/synthetic.hpp"

namespace {

using namespace gainsel;

struct RunArgs {
  std::string embeddings;
  std::string manifest;
  std::string out;
  std::string tails = "0.05,0.05";
  std::string strategy;
  std::string score_source = "ppl";
  std::size_t seeds = 20;
  bool progress = false;
  SelectionConfig config;
};

void add_run_flags(CLI::App* app, RunArgs& a) {
  app->add_option("--embeddings", a.embeddings, "binary embedding store")->required();
  app->add_option("--manifest", a.manifest, "JSONL sample manifest")->required();
  app->add_option("--budget", a.config.budget, "total selection budget B")->required();
  app->add_option("--clusters", a.config.clusters, "number of k-means clusters L")
      ->capture_default_str();
  app->add_option("--candidates", a.config.candidates, "candidate set size m")
      ->capture_default_str();
  app->add_option("--sigma", a.config.sigma, "Gaussian kernel bandwidth")->capture_default_str();
  app->add_option("--tails", a.tails, "low,high perplexity tail fractions")
      ->capture_default_str();
  app->add_option("--seed", a.config.seed, "random seed")->capture_default_str();
  app->add_option("--workers", a.config.workers, "worker threads G")->capture_default_str();
  app->add_option("--out", a.out, "output path (default: stdout)");
  app->add_flag("--normalize", a.config.normalize, "L2-normalize embeddings first");
  app->add_flag("--progress", a.progress, "report per-step progress on stderr");
}

std::pair<double, double> parse_tails(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError("--tails expects LOW,HIGH");
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      throw InputError("--tails: '" + std::string(s) + "' is not a number");
    }
    return v;
  };
  const std::string_view view(text);
  return {number(view.substr(0, comma)), number(view.substr(comma + 1))};
}

void finish_config(RunArgs& a) {
  const auto [low, high] = parse_tails(a.tails);
  a.config.tail_low = low;
  a.config.tail_high = high;
  a.config.score_source = parse_score_source(a.score_source);
  a.config.validate();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out.flush()) throw InputError(path + ": write failed");
}

PipelineOptions pipeline_options(bool progress) {
  PipelineOptions opts;
  if (progress) {
    opts.progress = [](std::size_t cluster, std::size_t step, double entropy) {
      std::fprintf(stderr, "progress\tcluster=%zu\tstep=%zu\tentropy=%.17g\n", cluster, step,
                   entropy);
    };
  }
  return opts;
}

void run_selection(RunArgs& a, Strategy strategy) {
  finish_config(a);
  const auto store = load_embedding_store(a.embeddings);
  const auto metas = load_sample_manifest(a.manifest, store);
  const auto manifest = run_strategy(store, metas, strategy, a.config, pipeline_options(a.progress));
  emit(serialize_manifest(manifest), a.out);
}

void run_diagnose(RunArgs& a) {
  finish_config(a);
  const auto store = load_embedding_store(a.embeddings);
  const auto metas = load_sample_manifest(a.manifest, store);
  const auto report = diversity_report(store, metas, parse_strategy(a.strategy), a.config,
                                       a.seeds, pipeline_options(a.progress));
  emit(format_report_csv(report), a.out);
}

int run(int argc, char** argv) {
  CLI::App app{"Entropy-gain data subset selection"};
  app.require_subcommand(1);

  RunArgs select_args;
  auto* select = app.add_subcommand("select", "run the clustered entropy-gain pipeline");
  add_run_flags(select, select_args);

  RunArgs baseline_args;
  auto* baseline = app.add_subcommand("baseline", "run a comparison strategy");
  add_run_flags(baseline, baseline_args);
  baseline->add_option("--strategy", baseline_args.strategy,
                       "random|mid_score|ccs|exam_average_allocation|mmd_minimize")
      ->required();
  baseline->add_option("--bins", baseline_args.config.bins, "score bins for ccs")
      ->capture_default_str();
  baseline->add_option("--score-source", baseline_args.score_source,
                       "value ranked by score-based strategies: ppl|score")
      ->capture_default_str();

  RunArgs diag_args;
  diag_args.strategy = "exam";
  auto* diagnose = app.add_subcommand("diagnose", "entropy statistics against random selection");
  add_run_flags(diagnose, diag_args);
  diagnose->add_option("--strategy", diag_args.strategy, "strategy to evaluate")
      ->capture_default_str();
  diagnose->add_option("--seeds", diag_args.seeds, "number of consecutive seeds")
      ->capture_default_str();
  diagnose->add_option("--bins", diag_args.config.bins, "score bins for ccs")
      ->capture_default_str();
  diagnose->add_option("--score-source", diag_args.score_source, "ppl|score")
      ->capture_default_str();

  auto* metrics = app.add_subcommand("metrics", "evaluation metrics");
  metrics->require_subcommand(1);
  std::string scores_path;
  auto* avg = metrics->add_subcommand("avg-rel", "average relative accuracy");
  avg->add_option("--scores", scores_path, "CSV rows of benchmark, subset, fullset")->required();

  std::size_t n = 1000, dim = 8, blobs = 10;
  double spread = 0.15;
  std::uint64_t gen_seed = 0;
  std::string emb_out, meta_out;
  auto* gen = app.add_subcommand("gen-synthetic", "write a Gaussian-mixture test dataset");
  gen->add_option("--count", n, "number of samples")->capture_default_str();
  gen->add_option("--dim", dim, "embedding dimension")->capture_default_str();
  gen->add_option("--blobs", blobs, "mixture components")->capture_default_str();
  gen->add_option("--spread", spread, "per-coordinate standard deviation")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--embeddings", emb_out, "output embedding store")->required();
  gen->add_option("--manifest", meta_out, "output JSONL sample manifest")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*select) {
    run_selection(select_args, Strategy::kExam);
  } else if (*baseline) {
    const auto strategy = parse_strategy(baseline_args.strategy);
    if (strategy == Strategy::kExam) throw InputError("'exam' is not a baseline; use select");
    run_selection(baseline_args, strategy);
  } else if (*diagnose) {
    run_diagnose(diag_args);
  } else if (*avg) {
    const auto scores = load_benchmark_scores(scores_path);
    std::printf("avg_rel\t%.4f\n", avg_rel(scores));
  } else if (*gen) {
    const auto data = gen_synthetic(n, dim, blobs, spread, gen_seed);
    write_embedding_store(data.store, emb_out);
    write_sample_manifest(data.metas, meta_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gainsel::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const gainsel::InvariantError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
