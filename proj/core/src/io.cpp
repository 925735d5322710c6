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

#include "gainsel/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <unordered_map>

#ifdef GAINSEL_VENDORED_JSON
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif

#include "gainsel/error.hpp"

namespace gainsel {
namespace {

template <typename T>
void put_le(std::vector<char>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const std::vector<char>& in, std::size_t offset) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return static_cast<T>(value);
}

std::string where(const std::filesystem::path& path) { return "'" + path.string() + "': "; }

}  // namespace

std::vector<char> encode_embedding_store(const EmbeddingStore& store) {
  std::vector<char> out;
  out.reserve(kEmbeddingHeaderSize + store.data().size() * 4);
  for (const char c : kEmbeddingMagic) out.push_back(c);
  put_le<std::uint16_t>(out, kEmbeddingVersion);
  put_le<std::uint64_t>(out, store.count());
  if (store.dim() > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("embedding dimension does not fit the u32 header field");
  }
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(store.dim()));
  for (const double v : store.data()) {
    put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

EmbeddingStore decode_embedding_store(const std::vector<char>& bytes) {
  if (bytes.size() < sizeof(kEmbeddingMagic) ||
      std::memcmp(bytes.data(), kEmbeddingMagic, sizeof(kEmbeddingMagic)) != 0) {
    throw InputError("bad magic at byte offset 0 (expected \"EGMS\")");
  }
  if (bytes.size() < kEmbeddingHeaderSize) {
    std::ostringstream msg;
    msg << "truncated header: " << bytes.size() << " bytes, need " << kEmbeddingHeaderSize;
    throw InputError(msg.str());
  }
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kEmbeddingVersion) {
    std::ostringstream msg;
    msg << "unsupported version " << version << " at byte offset 4";
    throw InputError(msg.str());
  }
  const auto count = get_le<std::uint64_t>(bytes, 6);
  const auto dim = get_le<std::uint32_t>(bytes, 14);
  if (dim == 0) throw InputError("zero dimension at byte offset 14");

  const std::uint64_t max_values = (bytes.size() - kEmbeddingHeaderSize) / 4;
  if (count > max_values / dim || count * dim > max_values) {
    std::ostringstream msg;
    msg << "truncated payload: header declares " << count << " x " << dim
        << " float32 values, file holds " << bytes.size() - kEmbeddingHeaderSize
        << " payload bytes after byte offset " << kEmbeddingHeaderSize;
    throw InputError(msg.str());
  }
  const std::uint64_t n_values = count * dim;
  const std::uint64_t payload_end = kEmbeddingHeaderSize + n_values * 4;
  if (payload_end != bytes.size()) {
    std::ostringstream msg;
    msg << "trailing data at byte offset " << payload_end << " (" << bytes.size() - payload_end
        << " extra bytes)";
    throw InputError(msg.str());
  }

  std::vector<double> data(n_values);
  for (std::uint64_t i = 0; i < n_values; ++i) {
    const std::size_t offset = kEmbeddingHeaderSize + i * 4;
    const float v = std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset));
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite value at row " << i / dim << ", column " << i % dim << " (byte offset "
          << offset << ")";
      throw InputError(msg.str());
    }
    data[i] = v;
  }
  return EmbeddingStore(count, dim, std::move(data));
}

void write_embedding_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  const auto bytes = encode_embedding_store(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(where(path) + "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError(where(path) + "write failed");
}

EmbeddingStore load_embedding_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(where(path) + "cannot open embedding file");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_embedding_store(bytes);
  } catch (const InputError& e) {
    throw InputError(where(path) + e.what());
  }
}

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  std::ostringstream msg;
  msg << "malformed line " << line_no << ": " << why;
  throw InputError(msg.str());
}

double finite_number(const nlohmann::json& value, std::size_t line_no, const char* field) {
  if (!value.is_number()) malformed(line_no, std::string("field '") + field + "' is not a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) malformed(line_no, std::string("field '") + field + "' is not finite");
  return v;
}

SampleMeta parse_sample(const std::string& line, std::size_t line_no) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(line_no, e.what());
  }
  if (!record.is_object()) malformed(line_no, "record is not a JSON object");

  SampleMeta meta;
  const auto id = record.find("id");
  if (id == record.end() || !id->is_string()) malformed(line_no, "missing string field 'id'");
  meta.id = id->get<std::string>();
  if (meta.id.empty()) malformed(line_no, "empty id");
  if (meta.id.find_first_of("\t\r\n") != std::string::npos) {
    malformed(line_no, "id contains a tab or line break");
  }

  if (const auto it = record.find("nlls"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) malformed(line_no, "field 'nlls' is not an array");
    std::vector<double> nlls;
    nlls.reserve(it->size());
    for (const auto& v : *it) {
      const double x = finite_number(v, line_no, "nlls");
      if (x < 0.0) malformed(line_no, "negative NLL entry");
      nlls.push_back(x);
    }
    meta.nlls = std::move(nlls);
  }
  if (const auto it = record.find("ppl"); it != record.end() && !it->is_null()) {
    const double ppl = finite_number(*it, line_no, "ppl");
    if (ppl <= 0.0) malformed(line_no, "field 'ppl' must be positive");
    meta.ppl = ppl;
  }
  if (const auto it = record.find("score"); it != record.end() && !it->is_null()) {
    meta.score = finite_number(*it, line_no, "score");
  }
  return meta;
}

}  // namespace

std::vector<SampleMeta> parse_sample_manifest(std::istream& in) {
  std::vector<SampleMeta> metas;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    SampleMeta meta = parse_sample(line, line_no);
    const auto [it, inserted] = first_line.emplace(meta.id, line_no);
    if (!inserted) {
      std::ostringstream msg;
      msg << "duplicate id '" << meta.id << "' on lines " << it->second << " and " << line_no;
      throw InputError(msg.str());
    }
    metas.push_back(std::move(meta));
  }
  return metas;
}

std::vector<SampleMeta> load_sample_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(where(path) + "cannot open sample manifest");
  try {
    return parse_sample_manifest(in);
  } catch (const InputError& e) {
    throw InputError(where(path) + e.what());
  }
}

std::vector<SampleMeta> load_sample_manifest(const std::filesystem::path& path,
                                             const EmbeddingStore& paired) {
  auto metas = load_sample_manifest(path);
  check_alignment(paired, metas);
  return metas;
}

std::string format_sample_line(const SampleMeta& meta) {
  nlohmann::json record;
  record["id"] = meta.id;
  if (meta.nlls) record["nlls"] = *meta.nlls;
  if (meta.ppl) record["ppl"] = *meta.ppl;
  if (meta.score) record["score"] = *meta.score;
  return record.dump();
}

void write_sample_manifest(std::span<const SampleMeta> metas, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError(where(path) + "cannot open for writing");
  for (const auto& meta : metas) out << format_sample_line(meta) << '\n';
  if (!out) throw InputError(where(path) + "write failed");
}

}  // namespace gainsel
