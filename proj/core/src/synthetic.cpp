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

#include "sgcl/synthetic.hpp"

#include <random>
#include <set>

#include "sgcl/error.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

CsrGraph random_bounded_degree_graph(std::size_t n, std::size_t max_degree,
                                     std::size_t target_edges, std::uint64_t seed) {
  require(n >= 1, ErrorKind::kArgument, "random graph needs at least one node");
  std::mt19937_64 rng(derive_seed(seed, 11));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> deg(n, 0);
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<std::pair<NodeId, NodeId>> edges;
  const std::size_t budget = 50 * (target_edges + 1);
  for (std::size_t attempt = 0; attempt < budget && edges.size() < target_edges; ++attempt) {
    auto u = static_cast<NodeId>(pick(rng));
    auto v = static_cast<NodeId>(pick(rng));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (deg[u] >= max_degree || deg[v] >= max_degree) continue;
    if (!seen.insert({u, v}).second) continue;
    ++deg[u];
    ++deg[v];
    edges.emplace_back(u, v);
  }
  return build_graph(n, edges, DenseMatrix(n, 0));
}

CsrGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::kArgument, "edge probability must lie in [0, 1]");
  std::mt19937_64 rng(derive_seed(seed, 12));
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  return build_graph(n, edges, DenseMatrix(n, 0));
}

CsrGraph stochastic_block_model(const SbmConfig& cfg, std::uint64_t seed) {
  require(cfg.blocks >= 1 && cfg.nodes >= cfg.blocks, ErrorKind::kArgument,
          "SBM needs at least one node per block");
  require(cfg.p_in >= 0 && cfg.p_in <= 1 && cfg.p_out >= 0 && cfg.p_out <= 1,
          ErrorKind::kArgument, "SBM probabilities must lie in [0, 1]");
  std::mt19937_64 rng(derive_seed(seed, 13));
  std::vector<std::int32_t> labels(cfg.nodes);
  for (std::size_t u = 0; u < cfg.nodes; ++u)
    labels[u] = static_cast<std::int32_t>(u * cfg.blocks / cfg.nodes);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < cfg.nodes; ++u) {
    for (std::size_t v = u + 1; v < cfg.nodes; ++v) {
      const double p = labels[u] == labels[v] ? cfg.p_in : cfg.p_out;
      if (unit(rng) < p) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }

  std::bernoulli_distribution sign(0.5);
  DenseMatrix means(cfg.blocks, cfg.feature_dim);
  for (std::size_t c = 0; c < cfg.blocks; ++c)
    for (std::size_t j = 0; j < cfg.feature_dim; ++j)
      means(c, j) = static_cast<float>((sign(rng) ? 0.5 : -0.5) * cfg.separation);

  std::normal_distribution<double> noise(0.0, 1.0);
  DenseMatrix x(cfg.nodes, cfg.feature_dim);
  for (std::size_t u = 0; u < cfg.nodes; ++u)
    for (std::size_t j = 0; j < cfg.feature_dim; ++j)
      x(u, j) = means(static_cast<std::size_t>(labels[u]), j) + static_cast<float>(noise(rng));

  return build_graph(cfg.nodes, edges, std::move(x), std::move(labels));
}

}  // namespace sgcl
