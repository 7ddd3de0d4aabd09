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

#include "sgcl/neuron.hpp"

#include <cmath>

#include "sgcl/error.hpp"

namespace sgcl {

std::string to_string(NeuronKind k) {
  switch (k) {
    case NeuronKind::kIF: return "if";
    case NeuronKind::kLIF: return "lif";
    case NeuronKind::kPLIF: return "plif";
  }
  return "?";
}

std::string to_string(ResetMode m) {
  return m == ResetMode::kToZero ? "to_zero" : "by_subtraction";
}

NeuronKind parse_neuron_kind(const std::string& s) {
  if (s == "if" || s == "IF") return NeuronKind::kIF;
  if (s == "lif" || s == "LIF") return NeuronKind::kLIF;
  if (s == "plif" || s == "PLIF") return NeuronKind::kPLIF;
  fail(ErrorKind::kConfig, "neuron: unknown kind '" + s + "' (if|lif|plif)");
}

ResetMode parse_reset_mode(const std::string& s) {
  if (s == "to_zero" || s == "zero") return ResetMode::kToZero;
  if (s == "by_subtraction" || s == "subtract" || s == "subtraction")
    return ResetMode::kBySubtraction;
  fail(ErrorKind::kConfig, "reset: unknown mode '" + s + "' (to_zero|by_subtraction)");
}

void validate(const NeuronConfig& cfg) {
  require(std::isfinite(cfg.v_threshold) && cfg.v_threshold > 0.0f, ErrorKind::kConfig,
          "v_threshold must be > 0");
  require(cfg.v_reset < cfg.v_threshold, ErrorKind::kConfig,
          "v_reset must be < v_threshold");
  require(std::isfinite(cfg.tau_m) && cfg.tau_m > 0.0f, ErrorKind::kConfig,
          "tau_m must be > 0");
  require(std::isfinite(cfg.surrogate_alpha) && cfg.surrogate_alpha > 0.0f,
          ErrorKind::kConfig, "surrogate_alpha must be > 0");
}

NeuronState make_state(std::size_t rows, std::size_t cols, const NeuronConfig& cfg) {
  return {DenseMatrix(rows, cols), cfg};
}

NeuronStep neuron_step(const NeuronState& state, const DenseMatrix& input_current) {
  check_same_shape(state.potential, input_current, "neuron_step");
  check_finite(input_current, "neuron_step input");
  const NeuronConfig& cfg = state.config;

  NeuronStep out;
  out.trace.prev_potential = state.potential;
  out.trace.input = input_current;
  out.trace.config = cfg;
  out.trace.potential = DenseMatrix(input_current.rows(), input_current.cols());
  out.spikes = BitMatrix(input_current.rows(), input_current.cols());
  out.state.config = cfg;
  out.state.potential = DenseMatrix(input_current.rows(), input_current.cols());

  // V + (I − (V − V_reset))/τ written as V·(1 − 1/τ) + (I + V_reset)/τ, exact for τ = 1.
  const float inv_tau = 1.0f / cfg.tau_m;
  const float decay = 1.0f - inv_tau;
  const bool leaky = cfg.kind != NeuronKind::kIF;
  const auto v_prev = state.potential.data();
  const auto in = input_current.data();
  auto v_int = out.trace.potential.data();
  auto v_next = out.state.potential.data();
  const std::size_t cols = input_current.cols();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const float v = leaky ? decay * v_prev[i] + (in[i] + cfg.v_reset) * inv_tau
                          : v_prev[i] + in[i];
    v_int[i] = v;
    const bool fired = v - cfg.v_threshold >= 0.0f;
    if (fired) {
      out.spikes.set(i / cols, i % cols, true);
      v_next[i] = cfg.reset_mode == ResetMode::kToZero ? cfg.v_reset : v - cfg.v_threshold;
    } else {
      v_next[i] = v;
    }
  }
  return out;
}

float surrogate_grad(float x, float alpha) {
  // σ(z)(1 − σ(z)) = e/(1 + e)² with e = exp(−|z|); avoids cancellation in 1 − σ.
  const float e = std::exp(-std::abs(alpha * x));
  return alpha * e / ((1.0f + e) * (1.0f + e));
}

DenseMatrix surrogate_grad(const DenseMatrix& v_minus_th, float alpha) {
  DenseMatrix out(v_minus_th.rows(), v_minus_th.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = surrogate_grad(v_minus_th.data()[i], alpha);
  return out;
}

NeuronGrad neuron_backward(const StepTrace* trace, const DenseMatrix& d_spikes,
                           const DenseMatrix* d_next_potential) {
  require(trace != nullptr, ErrorKind::kUsage, "neuron_backward: missing forward trace");
  check_same_shape(trace->potential, d_spikes, "neuron_backward");
  if (d_next_potential) check_same_shape(trace->potential, *d_next_potential, "neuron_backward");
  const NeuronConfig& cfg = trace->config;
  const bool leaky = cfg.kind != NeuronKind::kIF;
  const float inv_tau = 1.0f / cfg.tau_m;

  NeuronGrad g;
  g.d_input = DenseMatrix(d_spikes.rows(), d_spikes.cols());
  g.d_prev_potential = DenseMatrix(d_spikes.rows(), d_spikes.cols());
  double d_tau = 0.0;
  for (std::size_t i = 0; i < d_spikes.size(); ++i) {
    const float v = trace->potential.data()[i];
    const float surr = surrogate_grad(v - cfg.v_threshold, cfg.surrogate_alpha);
    // Gradient at the integrated (pre-reset) potential.
    float dv = d_spikes.data()[i] * surr;
    if (d_next_potential) {
      const float dn = d_next_potential->data()[i];
      if (cfg.reset_mode == ResetMode::kBySubtraction) {
        // V' = V − V_th·S
        dv += dn * (1.0f - cfg.v_threshold * surr);
      } else {
        // V' = S·V_reset + (1 − S)·V
        const float fired = v - cfg.v_threshold >= 0.0f ? 1.0f : 0.0f;
        dv += dn * ((1.0f - fired) + (cfg.v_reset - v) * surr);
      }
    }
    if (leaky) {
      g.d_input.data()[i] = dv * inv_tau;
      g.d_prev_potential.data()[i] = dv * (1.0f - inv_tau);
      const float v_prev = trace->prev_potential.data()[i];
      const float drive = trace->input.data()[i] - (v_prev - cfg.v_reset);
      d_tau += static_cast<double>(dv) * (-drive * inv_tau * inv_tau);
    } else {
      g.d_input.data()[i] = dv;
      g.d_prev_potential.data()[i] = dv;
    }
  }
  g.d_tau = d_tau;
  return g;
}

}  // namespace sgcl
