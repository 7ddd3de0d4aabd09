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

#include "sgcl/graph.hpp"

namespace sgcl {

// Random simple graph in which no node exceeds `max_degree`. Candidate pairs
// are drawn uniformly and kept while both endpoints have spare degree, until
// `target_edges` undirected edges exist or the attempt budget runs out.
// Features are left empty (N×0).
CsrGraph random_bounded_degree_graph(std::size_t n, std::size_t max_degree,
                                     std::size_t target_edges, std::uint64_t seed);

// Erdős–Rényi G(n, p) with N×0 features.
CsrGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

struct SbmConfig {
  std::size_t nodes = 400;
  std::size_t blocks = 2;
  double p_in = 0.1;
  double p_out = 0.01;
  std::size_t feature_dim = 32;
  // Class means are ±separation/2 per feature (one random sign pattern per
  // class); features get unit-variance Gaussian noise on top.
  double separation = 1.0;
};

// Stochastic block model with equal-sized blocks, labels = block index, and
// class-separated Gaussian features.
CsrGraph stochastic_block_model(const SbmConfig& cfg, std::uint64_t seed);

}  // namespace sgcl
