// Copyright 2026 The SGCL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgcl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "sgcl/error.hpp"

namespace sgcl {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_error(const std::filesystem::path& file, std::size_t line_no,
                              const std::string& msg) {
  fail(ErrorKind::kData,
       file.string() + ":" + std::to_string(line_no) + ": " + msg);
}

template <typename T>
T parse_int(std::string_view tok, const std::filesystem::path& file, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_error(file, line_no, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

float parse_float(std::string_view tok, const std::filesystem::path& file,
                  std::size_t line_no) {
  // strtof accepts forms (e.g. "1e-3", "nan") that from_chars<float> in older
  // libstdc++ does not; reject non-finite values explicitly.
  const std::string s(tok);
  char* end = nullptr;
  const float v = std::strtof(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    parse_error(file, line_no, "expected real number, got '" + s + "'");
  if (!std::isfinite(v)) parse_error(file, line_no, "non-finite feature value");
  return v;
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kData, "cannot open " + file.string());
  return in;
}

}  // namespace

CsrGraph build_graph(std::size_t num_nodes,
                     std::span<const std::pair<NodeId, NodeId>> edges,
                     DenseMatrix features,
                     std::optional<std::vector<std::int32_t>> labels) {
  require(features.rows() == num_nodes, ErrorKind::kDimension,
          "build_graph: features have " + std::to_string(features.rows()) +
              " rows for " + std::to_string(num_nodes) + " nodes");
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    require(u < num_nodes && v < num_nodes, ErrorKind::kData,
            "build_graph: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                ") out of range");
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  CsrGraph g;
  g.num_nodes = num_nodes;
  g.row_ptr.assign(num_nodes + 1, 0);
  g.col_idx.reserve(directed.size());
  for (const auto& [u, v] : directed) {
    ++g.row_ptr[u + 1];
    g.col_idx.push_back(v);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.row_ptr[i + 1] += g.row_ptr[i];
  g.features = std::move(features);
  if (labels) {
    require(labels->size() == num_nodes, ErrorKind::kData,
            "build_graph: " + std::to_string(labels->size()) + " labels for " +
                std::to_string(num_nodes) + " nodes");
    std::int32_t max_label = -1;
    for (auto l : *labels) {
      require(l >= 0, ErrorKind::kData, "build_graph: negative label");
      max_label = std::max(max_label, l);
    }
    g.num_classes = static_cast<std::size_t>(max_label + 1);
    g.labels = std::move(labels);
  }
  return g;
}

void validate(const CsrGraph& g) {
  require(g.row_ptr.size() == g.num_nodes + 1 && g.row_ptr.front() == 0 &&
              g.row_ptr.back() == g.col_idx.size(),
          ErrorKind::kData, "validate: row_ptr inconsistent with col_idx");
  require(g.features.rows() == g.num_nodes, ErrorKind::kData,
          "validate: feature rows != num_nodes");
  for (std::size_t u = 0; u < g.num_nodes; ++u) {
    require(g.row_ptr[u] <= g.row_ptr[u + 1], ErrorKind::kData,
            "validate: row_ptr not monotone at " + std::to_string(u));
    const auto nb = g.neighbors(static_cast<NodeId>(u));
    for (std::size_t i = 0; i < nb.size(); ++i) {
      require(nb[i] < g.num_nodes, ErrorKind::kData, "validate: neighbor out of range");
      require(nb[i] != u, ErrorKind::kData, "validate: stored self-loop at " + std::to_string(u));
      require(i == 0 || nb[i - 1] < nb[i], ErrorKind::kData,
              "validate: row " + std::to_string(u) + " not strictly increasing");
      const auto back = g.neighbors(nb[i]);
      require(std::binary_search(back.begin(), back.end(), static_cast<NodeId>(u)),
              ErrorKind::kData,
              "validate: asymmetric edge (" + std::to_string(u) + ", " +
                  std::to_string(nb[i]) + ")");
    }
  }
  if (g.labels) {
    require(g.labels->size() == g.num_nodes, ErrorKind::kData,
            "validate: label count != num_nodes");
  }
}

std::vector<std::int32_t> load_labels(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  std::vector<std::int32_t> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    labels.push_back(parse_int<std::int32_t>(t, file, line_no));
  }
  return labels;
}

CsrGraph load_graph(const std::filesystem::path& dir) {
  const auto edges_file = dir / "edges.csv";
  const auto features_file = dir / "features.csv";
  const auto labels_file = dir / "labels.csv";

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t max_id = 0;
  bool any_edge = false;
  {
    auto in = open_or_throw(edges_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto toks = split_commas(line);
      if (toks.size() != 2) parse_error(edges_file, line_no, "expected 'u,v'");
      const auto u = parse_int<NodeId>(toks[0], edges_file, line_no);
      const auto v = parse_int<NodeId>(toks[1], edges_file, line_no);
      edges.emplace_back(u, v);
      max_id = std::max<std::size_t>({max_id, u, v});
      any_edge = true;
    }
  }

  std::vector<float> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  {
    auto in = open_or_throw(features_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto toks = split_commas(line);
      if (rows == 0) {
        cols = toks.size();
      } else if (toks.size() != cols) {
        fail(ErrorKind::kDimension,
             features_file.string() + ":" + std::to_string(line_no) + ": row has " +
                 std::to_string(toks.size()) + " values, expected " + std::to_string(cols));
      }
      for (auto tok : toks) values.push_back(parse_float(tok, features_file, line_no));
      ++rows;
    }
  }
  if (any_edge && rows <= max_id) {
    fail(ErrorKind::kDimension,
         features_file.string() + ": " + std::to_string(rows) +
             " feature rows but edges reference node " + std::to_string(max_id));
  }

  std::optional<std::vector<std::int32_t>> labels;
  if (std::filesystem::exists(labels_file)) labels = load_labels(labels_file);

  auto g = build_graph(rows, edges, DenseMatrix(rows, cols, std::move(values)),
                       std::move(labels));
  validate(g);
  return g;
}

void save_graph(const CsrGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "edges.csv");
    if (!out) fail(ErrorKind::kData, "cannot write " + (dir / "edges.csv").string());
    for (std::size_t u = 0; u < g.num_nodes; ++u)
      for (NodeId v : g.neighbors(static_cast<NodeId>(u)))
        if (u < v) out << u << ',' << v << '\n';
  }
  {
    std::ofstream out(dir / "features.csv");
    if (!out) fail(ErrorKind::kData, "cannot write " + (dir / "features.csv").string());
    out.precision(9);
    for (std::size_t i = 0; i < g.features.rows(); ++i) {
      const auto r = g.features.row(i);
      for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << r[j];
      out << '\n';
    }
  }
  if (g.labels) {
    std::ofstream out(dir / "labels.csv");
    if (!out) fail(ErrorKind::kData, "cannot write " + (dir / "labels.csv").string());
    for (auto l : *g.labels) out << l << '\n';
  }
}

NormCoeffs sym_norm_coeffs(const CsrGraph& g) {
  NormCoeffs c;
  c.values.resize(g.col_idx.size());
  c.self_term.resize(g.num_nodes);
  for (std::size_t u = 0; u < g.num_nodes; ++u) {
    const double du = static_cast<double>(g.degree(static_cast<NodeId>(u))) + 1.0;
    c.self_term[u] = static_cast<float>(1.0 / du);
    for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) {
      const double dv = static_cast<double>(g.degree(g.col_idx[e])) + 1.0;
      c.values[e] = static_cast<float>(1.0 / std::sqrt(du * dv));
    }
  }
  return c;
}

CsrGraph drop_edges(const CsrGraph& g, double p, std::uint64_t seed) {
  require(p >= 0.0 && p < 1.0, ErrorKind::kArgument,
          "drop_edges: p must lie in [0, 1), got " + std::to_string(p));
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(p);
  std::vector<std::pair<NodeId, NodeId>> kept;
  kept.reserve(g.num_undirected_edges());
  // One draw per undirected pair (u < v), in CSR order.
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    for (NodeId v : g.neighbors(static_cast<NodeId>(u)))
      if (u < v && !(p > 0.0 && drop(rng))) kept.emplace_back(static_cast<NodeId>(u), v);
  return build_graph(g.num_nodes, kept, g.features, g.labels);
}

std::size_t degree_bound(const CsrGraph& g) {
  std::size_t d = 0;
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    d = std::max(d, g.degree(static_cast<NodeId>(u)));
  return d;
}

DenseMatrix dense_normalized_adjacency(const CsrGraph& g) {
  const auto c = sym_norm_coeffs(g);
  DenseMatrix a(g.num_nodes, g.num_nodes);
  for (std::size_t u = 0; u < g.num_nodes; ++u) {
    a(u, u) = c.self_term[u];
    for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) a(u, g.col_idx[e]) = c.values[e];
  }
  return a;
}

}  // namespace sgcl
