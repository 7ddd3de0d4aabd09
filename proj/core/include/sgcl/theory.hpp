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
#include <vector>

#include "sgcl/dense.hpp"
#include "sgcl/encoder.hpp"
#include "sgcl/graph.hpp"
#include "sgcl/neuron.hpp"

namespace sgcl {

// Full-precision L-layer GCN without biases: W¹ is d×k, deeper layers k×k.
struct OracleGcn {
  std::vector<DenseMatrix> weights;

  std::size_t depth() const { return weights.size(); }
};

// z* = relu(Â·relu(Â·X·W¹)·W²…), ReLU after every layer including the last.
DenseMatrix oracle_forward(const CsrGraph& g, const OracleGcn& oracle);

// Largest singular value by power iteration on WᵀW (at most 100 iterations,
// stops at 1e-6 relative change).
double operator_norm(const DenseMatrix& w);

// IF neurons with reset by subtraction whose firing rates track the oracle:
// first_weights[t] = T·(t-th row block of W¹), shared layers = v_th·W^l,
// zero biases.
EncoderParams construct_snn(const OracleGcn& oracle, std::size_t t_steps, float v_th);

struct LayerTrace {
  DenseMatrix current_sum;      // Σ_t H^l(t)
  DenseMatrix spike_count;      // N^l(T)
  DenseMatrix final_potential;  // V^l(T)
};

struct RunTrace {
  NeuronConfig neuron;
  std::size_t steps = 0;
  std::vector<LayerTrace> layers;
  float min_potential = 0.0f;  // lowest potential seen anywhere, before or after reset
  DenseMatrix rates;           // N^L(T)/T of the last layer
};

// Runs a spiking GCN in which every layer has its own neuron: layer 1 reads
// feature group t at step t, layer l > 1 reads the spikes s^{l−1}(t).
RunTrace run_layered_snn(const CsrGraph& g, const EncoderParams& params);

// Feeds a fixed sequence of input currents through one neuron population.
RunTrace run_currents(std::span<const DenseMatrix> currents, const NeuronConfig& cfg);

struct ChargeIdentityReport {
  double max_residual = 0.0;  // max |V(T) − (ΣH − N(T)·V_th)|
  ResetMode reset_mode = ResetMode::kBySubtraction;
};

// Throws kUsage for non-IF traces. Reset-to-zero traces are accepted so the
// identity's failure can be observed; the report names the mode.
ChargeIdentityReport charge_identity_check(const RunTrace& trace);

struct BoundReport {
  std::vector<double> node_error;  // ‖ẑ_v − z*_v‖₂
  std::vector<bool> node_pass;
  double bound = 0.0;
  double kappa = 1.0;
  double nu = 0.0;
  std::size_t max_degree = 0;
  std::size_t feature_dim = 0;
  std::size_t steps = 0;

  double max_error() const;
  double median_error() const;
  bool all_pass() const;
};

// sqrt(d)·kappa·(sqrt(1+D)·nu)^L / (T·sqrt(T))
double approximation_bound(std::size_t d, double kappa, std::size_t max_degree, double nu,
                           std::size_t depth, std::size_t t_steps);

// Builds the SNN for `oracle`, runs it for T steps and compares its last-layer
// firing rates with oracle_forward node by node. Throws kConfig unless the
// neuron is IF with reset by subtraction.
BoundReport verify_bound(const CsrGraph& g, const OracleGcn& oracle, std::size_t t_steps,
                         float v_th, ResetMode reset = ResetMode::kBySubtraction);

struct BoundInstance {
  CsrGraph graph;
  OracleGcn oracle;
};

// Random graph with degrees ≤ max_degree and features uniform in [0, 1), plus
// a Gaussian oracle (std 0.8/sqrt(fan_in)). A layer whose largest
// pre-activation exceeds 1 is scaled down to 1, since a firing rate cannot.
BoundInstance make_bound_instance(std::size_t n, std::size_t max_degree, std::size_t depth,
                                      std::size_t d, std::size_t k, std::uint64_t seed);

}  // namespace sgcl
