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
#include <vector>

#include "gainsel/datamodel.hpp"

namespace gainsel {

struct SyntheticData {
  EmbeddingStore store;
  std::vector<SampleMeta> metas;
  std::vector<std::size_t> labels;  // ground-truth blob of each sample
};

/// Gaussian mixture with k_blobs means drawn uniformly from [-10, 10]^dim and
/// isotropic per-coordinate standard deviation `spread`. Sample i belongs to
/// blob i % k_blobs. Embedding values are rounded to float32 so the result
/// survives the on-disk format bit-exactly. Each sample gets ln(ppl) drawn
/// from a normal folded at zero (ppl >= 1) and a uniform score in [0, 1).
SyntheticData gen_synthetic(std::size_t n, std::size_t dim, std::size_t k_blobs, double spread,
                            std::uint64_t seed);

}  // namespace gainsel
