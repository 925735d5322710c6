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

#include "gainsel/manifest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "gainsel/error.hpp"

namespace gainsel {
namespace {

constexpr const char* kFormatTag = "gainsel-manifest";
constexpr int kFormatVersion = 1;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("-");
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string> next(const std::string& expected_key) {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of manifest, expected '" + expected_key + "'");
    ++line_no_;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.front() != expected_key) {
      fail("expected '" + expected_key + "', found '" + fields.front() + "'");
    }
    return fields;
  }

  std::vector<std::string> next(const std::string& key, std::size_t n_fields) {
    auto fields = next(key);
    if (fields.size() != n_fields + 1) fail("wrong field count for '" + key + "'");
    return fields;
  }

  template <typename T>
  T number(const std::string& text) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail("bad number '" + text + "'");
    }
    return value;
  }

  std::optional<double> optional_number(const std::string& text) {
    if (text == "-") return std::nullopt;
    return number<double>(text);
  }

  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream msg;
    msg << "selection manifest line " << line_no_ << ": " << why;
    throw InputError(msg.str());
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string serialize_manifest(const SelectionManifest& manifest) {
  const auto& c = manifest.config;
  std::ostringstream out;
  out << kFormatTag << '\t' << kFormatVersion << '\n';
  out << "strategy\t" << manifest.strategy << '\n';
  out << "budget\t" << c.budget << '\n';
  out << "clusters\t" << c.clusters << '\n';
  out << "candidates\t" << c.candidates << '\n';
  out << "sigma\t" << format_double(c.sigma) << '\n';
  out << "tails\t" << format_double(c.tail_low) << ',' << format_double(c.tail_high) << '\n';
  out << "seed\t" << c.seed << '\n';
  out << "bins\t" << c.bins << '\n';
  out << "score_source\t" << to_string(c.score_source) << '\n';
  out << "normalize\t" << (c.normalize ? 1 : 0) << '\n';

  out << "filtered_out\t" << manifest.filtered_out.size() << '\n';
  for (const auto& id : manifest.filtered_out) out << "filtered\t" << id << '\n';

  out << "cluster_count\t" << manifest.per_cluster.size() << '\n';
  for (const auto& cl : manifest.per_cluster) {
    out << "cluster\t" << cl.cluster << '\t' << cl.size << '\t' << cl.budget << '\t'
        << cl.rows.size() << '\t' << format_optional(cl.final_entropy) << '\n';
  }

  out << "selected\t" << manifest.selected.size() << '\n';
  for (const auto& rec : manifest.selected) {
    out << "sample\t" << rec.id << '\t' << rec.cluster << '\t' << rec.step << '\t'
        << format_optional(rec.entropy) << '\n';
  }
  out << "end\n";
  return out.str();
}

void write_manifest(const SelectionManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("'" + path.string() + "': cannot open for writing");
  const auto text = serialize_manifest(manifest);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("'" + path.string() + "': write failed");
}

SelectionManifest parse_manifest(std::istream& in) {
  LineReader r(in);
  SelectionManifest m;
  auto& c = m.config;

  if (r.number<int>(r.next(kFormatTag, 1)[1]) != kFormatVersion) r.fail("unsupported version");
  m.strategy = r.next("strategy", 1)[1];
  c.budget = r.number<std::size_t>(r.next("budget", 1)[1]);
  c.clusters = r.number<std::size_t>(r.next("clusters", 1)[1]);
  c.candidates = r.number<std::size_t>(r.next("candidates", 1)[1]);
  c.sigma = r.number<double>(r.next("sigma", 1)[1]);
  {
    const auto tails = r.next("tails", 1)[1];
    const auto comma = tails.find(',');
    if (comma == std::string::npos) r.fail("tails must be LOW,HIGH");
    c.tail_low = r.number<double>(tails.substr(0, comma));
    c.tail_high = r.number<double>(tails.substr(comma + 1));
  }
  c.seed = r.number<std::uint64_t>(r.next("seed", 1)[1]);
  c.bins = r.number<std::size_t>(r.next("bins", 1)[1]);
  try {
    c.score_source = parse_score_source(r.next("score_source", 1)[1]);
  } catch (const InputError& e) {
    r.fail(e.what());
  }
  c.normalize = r.number<int>(r.next("normalize", 1)[1]) != 0;

  const auto n_filtered = r.number<std::size_t>(r.next("filtered_out", 1)[1]);
  for (std::size_t i = 0; i < n_filtered; ++i) m.filtered_out.push_back(r.next("filtered", 1)[1]);

  const auto n_clusters = r.number<std::size_t>(r.next("cluster_count", 1)[1]);
  std::vector<std::size_t> selected_counts;
  for (std::size_t i = 0; i < n_clusters; ++i) {
    const auto f = r.next("cluster", 5);
    ClusterRecord cl;
    cl.cluster = r.number<std::size_t>(f[1]);
    cl.size = r.number<std::size_t>(f[2]);
    cl.budget = r.number<std::size_t>(f[3]);
    selected_counts.push_back(r.number<std::size_t>(f[4]));
    cl.final_entropy = r.optional_number(f[5]);
    m.per_cluster.push_back(std::move(cl));
  }

  const auto n_selected = r.number<std::size_t>(r.next("selected", 1)[1]);
  for (std::size_t i = 0; i < n_selected; ++i) {
    const auto f = r.next("sample", 4);
    SelectedRecord rec;
    rec.row = i;
    rec.id = f[1];
    rec.cluster = r.number<std::int64_t>(f[2]);
    rec.step = r.number<std::size_t>(f[3]);
    rec.entropy = r.optional_number(f[4]);
    m.selected.push_back(std::move(rec));
  }
  r.next("end", 0);

  // Cluster row lists are positions into the selected list.
  for (std::size_t ci = 0; ci < m.per_cluster.size(); ++ci) {
    auto& cl = m.per_cluster[ci];
    for (const auto& rec : m.selected) {
      if (rec.cluster == static_cast<std::int64_t>(cl.cluster)) cl.rows.push_back(rec.row);
    }
    if (cl.rows.size() != selected_counts[ci]) r.fail("cluster selection count mismatch");
  }
  return m;
}

}  // namespace gainsel
