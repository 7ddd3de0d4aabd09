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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "sgcl/dense.hpp"

namespace sgcl {

using NodeId = std::uint32_t;

// Undirected attributed graph in CSR form. Each undirected edge is stored as
// two directed entries; self-loops are never stored.
struct CsrGraph {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<NodeId> col_idx;
  DenseMatrix features;
  std::optional<std::vector<std::int32_t>> labels;
  std::optional<std::size_t> num_classes;

  std::size_t degree(NodeId u) const { return row_ptr[u + 1] - row_ptr[u]; }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {col_idx.data() + row_ptr[u], degree(u)};
  }
  std::size_t num_directed_edges() const { return col_idx.size(); }
  std::size_t num_undirected_edges() const { return col_idx.size() / 2; }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;
};

// GCN coefficients with implicit self-loop:
//   values[e] = 1/sqrt((deg(u)+1)(deg(v)+1)) for the e-th CSR entry (u, v)
//   self_term[u] = 1/(deg(u)+1)
struct NormCoeffs {
  std::vector<float> values;
  std::vector<float> self_term;
};

// Builds a validated graph from an arbitrary edge list: self-loops are
// dropped, duplicates removed, and every edge symmetrized.
CsrGraph build_graph(std::size_t num_nodes,
                     std::span<const std::pair<NodeId, NodeId>> edges,
                     DenseMatrix features,
                     std::optional<std::vector<std::int32_t>> labels = std::nullopt);

// Throws ErrorKind::kData when symmetry, sortedness or shape invariants fail.
void validate(const CsrGraph& g);

// Reads edges.csv, features.csv and optional labels.csv from `dir`.
CsrGraph load_graph(const std::filesystem::path& dir);
void save_graph(const CsrGraph& g, const std::filesystem::path& dir);

// Reads a one-integer-per-line label file.
std::vector<std::int32_t> load_labels(const std::filesystem::path& file);

NormCoeffs sym_norm_coeffs(const CsrGraph& g);

// Removes each undirected edge independently with probability p (0 <= p < 1).
CsrGraph drop_edges(const CsrGraph& g, double p, std::uint64_t seed);

// Maximum node degree.
std::size_t degree_bound(const CsrGraph& g);

// Dense normalized adjacency with self-loops, mainly for tests and small
// verification instances.
DenseMatrix dense_normalized_adjacency(const CsrGraph& g);

}  // namespace sgcl
