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

#include "gainsel/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gainsel/error.hpp"

namespace gainsel {

double perplexity_from_nlls(std::span<const double> nlls) {
  if (nlls.empty()) throw InputError("empty NLL sequence");
  double sum = 0.0;
  for (const double x : nlls) {
    if (!std::isfinite(x) || x < 0.0) throw InputError("NLL entries must be finite and >= 0");
    sum += x;
  }
  return std::exp(sum / static_cast<double>(nlls.size()));
}

std::vector<double> resolve_perplexities(std::span<const SampleMeta> metas) {
  std::vector<double> ppls;
  ppls.reserve(metas.size());
  for (const auto& meta : metas) {
    if (meta.ppl) {
      ppls.push_back(*meta.ppl);
    } else if (meta.nlls) {
      try {
        ppls.push_back(perplexity_from_nlls(*meta.nlls));
      } catch (const InputError& e) {
        throw InputError("sample '" + meta.id + "': " + e.what());
      }
    } else {
      throw InputError("sample '" + meta.id + "' has neither ppl nor nlls");
    }
  }
  return ppls;
}

std::size_t tail_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));
}

FilteredSet filter_extremes(std::span<const double> ppls, double tail_low, double tail_high) {
  if (!(tail_low >= 0.0) || !(tail_high >= 0.0) || !(tail_low + tail_high < 1.0)) {
    throw InputError("tail fractions must be >= 0 and sum to less than 1");
  }
  for (std::size_t i = 0; i < ppls.size(); ++i) {
    if (!std::isfinite(ppls[i]) || ppls[i] <= 0.0) {
      std::ostringstream msg;
      msg << "PPL of sample " << i << " is not finite and positive";
      throw InputError(msg.str());
    }
  }

  const std::size_t n = ppls.size();
  const std::size_t n_low = tail_count(n, tail_low);
  const std::size_t n_high = tail_count(n, tail_high);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ppls[a] < ppls[b]; });

  // Lowest tail: the first n_low in ascending (ppl, index) order. Highest
  // tail: among the rest, descending ppl with the lower index first on ties.
  std::vector<char> state(n, 0);  // 0 kept, 1 low, 2 high
  for (std::size_t i = 0; i < n_low; ++i) state[order[i]] = 1;
  std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(n_low), order.end());
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    if (ppls[a] != ppls[b]) return ppls[a] > ppls[b];
    return a < b;
  });
  for (std::size_t i = 0; i < n_high; ++i) state[rest[i]] = 2;

  FilteredSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] == 0) out.kept.push_back(i);
    else if (state[i] == 1) out.removed_low.push_back(i);
    else out.removed_high.push_back(i);
  }
  if (!out.kept.empty()) {
    const auto [lo, hi] = std::minmax_element(out.kept.begin(), out.kept.end(),
                                              [&](std::size_t a, std::size_t b) {
                                                return ppls[a] < ppls[b];
                                              });
    out.low_cutoff = ppls[*lo];
    out.high_cutoff = ppls[*hi];
  }
  return out;
}

}  // namespace gainsel
