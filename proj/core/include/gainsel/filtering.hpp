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
#include <span>
#include <vector>

#include "gainsel/datamodel.hpp"

namespace gainsel {

/// exp(mean(nlls)). Throws InputError on an empty sequence or an entry that
/// is negative or non-finite.
double perplexity_from_nlls(std::span<const double> nlls);

/// Per-sample PPL: the stored value when present, otherwise computed from the
/// token NLLs. A sample with neither is an InputError.
std::vector<double> resolve_perplexities(std::span<const SampleMeta> metas);

struct FilteredSet {
  std::vector<std::size_t> kept;  // original index order
  std::vector<std::size_t> removed_low;
  std::vector<std::size_t> removed_high;
  double low_cutoff = 0.0;   // smallest kept PPL
  double high_cutoff = 0.0;  // largest kept PPL
};

/// floor(n * fraction), robust to the representation error of fractions
/// such as 0.29.
std::size_t tail_count(std::size_t n, double fraction);

/// Removes the tail_count(n, tail_low) lowest and tail_count(n, tail_high)
/// highest PPL samples. Among tied values the lower index is removed first.
FilteredSet filter_extremes(std::span<const double> ppls, double tail_low, double tail_high);

}  // namespace gainsel
