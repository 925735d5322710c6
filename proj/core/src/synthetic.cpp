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

#include "gainsel/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "gainsel/error.hpp"
#include "gainsel/rng.hpp"

namespace gainsel {

SyntheticData gen_synthetic(std::size_t n, std::size_t dim, std::size_t k_blobs, double spread,
                            std::uint64_t seed) {
  if (k_blobs < 1) throw InputError("need at least one blob");
  if (n < k_blobs) throw InputError("sample count must be at least the blob count");
  if (dim < 1) throw InputError("dimension must be positive");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw InputError("spread must be >= 0");

  Rng rng(seed);
  std::vector<double> means(k_blobs * dim);
  for (auto& m : means) m = -10.0 + 20.0 * rng.uniform();

  SyntheticData out;
  std::vector<double> data(n * dim);
  out.metas.resize(n);
  out.labels.resize(n);
  const int width = static_cast<int>(std::to_string(n > 0 ? n - 1 : 0).size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t blob = i % k_blobs;
    out.labels[i] = blob;
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = means[blob * dim + k] + spread * rng.normal();
      data[i * dim + k] = static_cast<double>(static_cast<float>(v));
    }
    char id[32];
    std::snprintf(id, sizeof(id), "s%0*zu", width, i);
    auto& meta = out.metas[i];
    meta.id = id;
    meta.ppl = std::exp(std::fabs(1.0 + 0.5 * rng.normal()));
    meta.score = rng.uniform();
  }
  out.store = EmbeddingStore(n, dim, std::move(data));
  return out;
}

}  // namespace gainsel
