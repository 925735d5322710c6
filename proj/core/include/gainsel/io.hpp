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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gainsel/datamodel.hpp"

namespace gainsel {

// Embedding file layout (little-endian, no padding):
//   "EGMS" | u16 version = 1 | u64 count | u32 dim | count*dim float32 row-major
inline constexpr char kEmbeddingMagic[4] = {'E', 'G', 'M', 'S'};
inline constexpr std::uint16_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 4 + 2 + 8 + 4;

std::vector<char> encode_embedding_store(const EmbeddingStore& store);
EmbeddingStore decode_embedding_store(const std::vector<char>& bytes);

void write_embedding_store(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore load_embedding_store(const std::filesystem::path& path);

// Sample manifest: one JSON object per line,
//   {"id": "...", "nlls": [..], "ppl": x, "score": y}
// with only "id" required. Blank lines are skipped but still counted.
std::vector<SampleMeta> parse_sample_manifest(std::istream& in);
std::vector<SampleMeta> load_sample_manifest(const std::filesystem::path& path);
std::vector<SampleMeta> load_sample_manifest(const std::filesystem::path& path,
                                             const EmbeddingStore& paired);

std::string format_sample_line(const SampleMeta& meta);
void write_sample_manifest(std::span<const SampleMeta> metas, const std::filesystem::path& path);

}  // namespace gainsel
