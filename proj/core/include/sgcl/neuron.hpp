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

#include <cmath>
#include <optional>
#include <string>

#include "sgcl/bits.hpp"
#include "sgcl/dense.hpp"

namespace sgcl {

enum class NeuronKind { kIF, kLIF, kPLIF };
enum class ResetMode { kToZero, kBySubtraction };

std::string to_string(NeuronKind k);
std::string to_string(ResetMode m);
NeuronKind parse_neuron_kind(const std::string& s);  // "if" | "lif" | "plif"
ResetMode parse_reset_mode(const std::string& s);    // "to_zero" | "by_subtraction"

struct NeuronConfig {
  NeuronKind kind = NeuronKind::kPLIF;
  float v_threshold = 5e-3f;
  float v_reset = 0.0f;
  ResetMode reset_mode = ResetMode::kBySubtraction;
  // Membrane time constant. Fixed for LIF; for PLIF this is the current value
  // of the learnable constant (see plif_tau).
  float tau_m = 1.0f;
  float surrogate_alpha = 2.0f;
};

// Throws ErrorKind::kConfig unless v_threshold > 0, v_reset < v_threshold and
// tau_m > 0.
void validate(const NeuronConfig& cfg);

// PLIF keeps tau_m = exp(raw) so that gradient steps on `raw` can never make
// the time constant non-positive. raw = 0 gives tau_m = 1 exactly.
inline float plif_tau(float raw) { return std::exp(raw); }

struct NeuronState {
  DenseMatrix potential;
  NeuronConfig config;
};

NeuronState make_state(std::size_t rows, std::size_t cols, const NeuronConfig& cfg);

// Values retained from one forward step for the backward pass.
struct StepTrace {
  DenseMatrix prev_potential;  // carried in, after the previous reset
  DenseMatrix input;           // I^t
  DenseMatrix potential;       // after integration, before reset
  NeuronConfig config;
};

struct NeuronStep {
  BitMatrix spikes;
  NeuronState state;
  StepTrace trace;
};

// Integrate, fire (Θ(x) = 1 iff x >= 0) and reset.
//   IF:       V ← V + I
//   LIF/PLIF: V ← V + (I − (V − V_reset)) / tau_m
NeuronStep neuron_step(const NeuronState& state, const DenseMatrix& input_current);

// d/dx σ(αx) = α·σ(αx)·(1 − σ(αx)); stands in for Θ'(x).
float surrogate_grad(float x, float alpha);
DenseMatrix surrogate_grad(const DenseMatrix& v_minus_th, float alpha);

struct NeuronGrad {
  DenseMatrix d_input;
  DenseMatrix d_prev_potential;  // only meaningful when gradients cross steps
  double d_tau = 0.0;            // ∂/∂tau_m, LIF/PLIF only
};

// Backward through one step. `d_spikes` is the upstream gradient on S^t.
// `d_next_potential`, when given, is the gradient arriving at the post-reset
// potential from step t+1; it flows through the reset (with the surrogate
// standing in for ∂S/∂V) and the integration. Without it, the result reduces to
//   d_input = d_spikes ⊙ surrogate(V − V_th) · ∂V/∂I.
NeuronGrad neuron_backward(const StepTrace* trace, const DenseMatrix& d_spikes,
                           const DenseMatrix* d_next_potential = nullptr);

}  // namespace sgcl
