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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sgcl/error.hpp"
#include "sgcl/neuron.hpp"

using namespace sgcl;

namespace {

NeuronStep step1(const NeuronConfig& cfg, float v, float i) {
  NeuronState s = make_state(1, 1, cfg);
  s.potential(0, 0) = v;
  return neuron_step(s, DenseMatrix(1, 1, {i}));
}

// Scalar double-precision replay of forward and surrogate BPTT for one unit.
struct ScalarRun {
  std::vector<double> d_input;
  double d_tau = 0.0;
};

ScalarRun scalar_bptt(const NeuronConfig& c, const std::vector<double>& in,
                      const std::vector<double>& up) {
  const std::size_t n = in.size();
  std::vector<double> pre(n), post(n + 1, 0.0), vin(n);
  const bool leaky = c.kind != NeuronKind::kIF;
  const double tau = c.tau_m;
  for (std::size_t t = 0; t < n; ++t) {
    vin[t] = post[t];
    pre[t] = leaky ? post[t] + (in[t] - (post[t] - c.v_reset)) / tau : post[t] + in[t];
    const bool s = pre[t] >= c.v_threshold;
    post[t + 1] = !s ? pre[t]
                : c.reset_mode == ResetMode::kToZero ? c.v_reset
                                                     : pre[t] - c.v_threshold;
  }
  ScalarRun r;
  r.d_input.assign(n, 0.0);
  double carry = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double x = pre[t] - c.v_threshold;
    const double sg = c.surrogate_alpha * oracle::sigmoid(c.surrogate_alpha * x) *
                      (1.0 - oracle::sigmoid(c.surrogate_alpha * x));
    double dv = up[t] * sg;
    if (t + 1 < n) {
      if (c.reset_mode == ResetMode::kBySubtraction) {
        dv += carry * (1.0 - c.v_threshold * sg);
      } else {
        const double fired = x >= 0 ? 1.0 : 0.0;
        dv += carry * ((1.0 - fired) + (c.v_reset - pre[t]) * sg);
      }
    }
    if (leaky) {
      r.d_input[t] = dv / tau;
      r.d_tau += dv * -(in[t] - (vin[t] - c.v_reset)) / (tau * tau);
      carry = dv * (1.0 - 1.0 / tau);
    } else {
      r.d_input[t] = dv;
      carry = dv;
    }
  }
  return r;
}

}  // namespace

TEST_SUITE("neuron") {

TEST_CASE("single-step examples") {
  NeuronConfig cfg;
  cfg.kind = NeuronKind::kIF;
  cfg.v_threshold = 0.5f;
  SUBCASE("IF fires and subtracts") {
    const auto out = step1(cfg, 0.3f, 0.4f);
    CHECK(out.spikes.get(0, 0));
    CHECK(out.state.potential(0, 0) == doctest::Approx(0.2));
  }
  SUBCASE("no stimulus") {
    const auto out = step1(cfg, 0.0f, 0.0f);
    CHECK_FALSE(out.spikes.get(0, 0));
    CHECK(out.state.potential(0, 0) == 0.0f);
  }
  SUBCASE("firing exactly at threshold") {
    CHECK(step1(cfg, 0.0f, 0.5f).spikes.get(0, 0));
  }
  SUBCASE("LIF decays toward reset") {
    cfg.kind = NeuronKind::kLIF;
    cfg.v_threshold = 2.0f;
    cfg.tau_m = 2.0f;
    CHECK(step1(cfg, 1.0f, 0.0f).state.potential(0, 0) == doctest::Approx(0.5));
  }
  SUBCASE("LIF with tau 4 keeps three quarters") {
    cfg.kind = NeuronKind::kLIF;
    cfg.v_threshold = 2.0f;
    cfg.tau_m = 4.0f;
    CHECK(step1(cfg, 1.0f, 0.0f).state.potential(0, 0) == doctest::Approx(0.75));
    CHECK(step1(cfg, 0.0f, 1.0f).state.potential(0, 0) == doctest::Approx(0.25));
  }
  SUBCASE("PLIF at raw 0 behaves like IF without memory") {
    cfg.kind = NeuronKind::kPLIF;
    cfg.tau_m = plif_tau(0.0f);
    CHECK(cfg.tau_m == 1.0f);
    CHECK(step1(cfg, 0.3f, 0.2f).state.potential(0, 0) == doctest::Approx(0.2));
  }
  SUBCASE("reset to zero lands on v_reset") {
    cfg.reset_mode = ResetMode::kToZero;
    cfg.v_reset = -0.25f;
    const auto out = step1(cfg, 0.3f, 0.9f);
    CHECK(out.spikes.get(0, 0));
    CHECK(out.state.potential(0, 0) == -0.25f);
  }
  SUBCASE("shape mismatch") {
    const auto s = make_state(2, 2, cfg);
    try {
      neuron_step(s, DenseMatrix(2, 3));
      FAIL("expected dimension error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kDimension);
    }
  }
}

TEST_CASE("config parsing and validation") {
  CHECK(parse_neuron_kind("plif") == NeuronKind::kPLIF);
  CHECK(parse_reset_mode("to_zero") == ResetMode::kToZero);
  CHECK_THROWS_AS(parse_neuron_kind("izhikevich"), Error);
  NeuronConfig cfg;
  cfg.v_threshold = 0.0f;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.tau_m = -1.0f;
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("spike count is monotone in a constant input") {
  NeuronConfig cfg;
  cfg.kind = NeuronKind::kIF;
  cfg.v_threshold = 1.0f;
  std::size_t prev = 0;
  for (float i = 0.0f; i <= 2.0f; i += 0.125f) {
    NeuronState s = make_state(1, 1, cfg);
    std::size_t n = 0;
    for (int t = 0; t < 32; ++t) {
      auto out = neuron_step(s, DenseMatrix(1, 1, {i}));
      n += out.spikes.count_ones();
      s = std::move(out.state);
    }
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("subtraction reset conserves charge") {
  // Σ I = V_T + V_th · Σ S for IF starting at rest.
  NeuronConfig cfg;
  cfg.kind = NeuronKind::kIF;
  cfg.v_threshold = 0.7f;
  const auto in = oracle::random_matrix(16, 8, 3, -0.2f, 1.0f);
  NeuronState s = make_state(1, 8, cfg);
  std::vector<double> total(8, 0.0), spikes(8, 0.0);
  for (std::size_t t = 0; t < 16; ++t) {
    DenseMatrix row(1, 8);
    for (std::size_t j = 0; j < 8; ++j) {
      row(0, j) = in(t, j);
      total[j] += in(t, j);
    }
    auto out = neuron_step(s, row);
    for (std::size_t j = 0; j < 8; ++j) spikes[j] += out.spikes.get(0, j);
    s = std::move(out.state);
  }
  for (std::size_t j = 0; j < 8; ++j)
    CHECK(total[j] == doctest::Approx(s.potential(0, j) + 0.7 * spikes[j]).epsilon(1e-5));
}

TEST_CASE("surrogate gradient") {
  CHECK(surrogate_grad(0.0f, 2.0f) == doctest::Approx(0.5));
  CHECK(surrogate_grad(100.0f, 2.0f) == doctest::Approx(0.0));
  CHECK(surrogate_grad(-100.0f, 2.0f) == doctest::Approx(0.0));
  for (float x = -3.0f; x <= 3.0f; x += 0.25f) {
    for (float alpha : {0.5f, 2.0f, 4.0f}) {
      const double h = 1e-4;
      const double fd = (oracle::sigmoid(alpha * (x + h)) - oracle::sigmoid(alpha * (x - h))) / (2 * h);
      CHECK(surrogate_grad(x, alpha) == doctest::Approx(fd).epsilon(1e-4));
    }
  }
}

TEST_CASE("neuron_backward single step") {
  NeuronConfig cfg;
  cfg.kind = NeuronKind::kIF;
  cfg.v_threshold = 0.5f;
  const auto out = step1(cfg, 0.1f, 0.4f);
  CHECK(neuron_backward(&out.trace, DenseMatrix(1, 1, {1.0f})).d_input(0, 0) ==
        doctest::Approx(0.5));
  CHECK(neuron_backward(&out.trace, DenseMatrix(1, 1, {0.0f})).d_input(0, 0) == 0.0f);
  try {
    neuron_backward(nullptr, DenseMatrix(1, 1));
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUsage);
  }
}

TEST_CASE("multi-step backward matches a scalar replay") {
  const std::size_t steps = 12;
  for (auto kind : {NeuronKind::kIF, NeuronKind::kLIF}) {
    for (auto reset : {ResetMode::kBySubtraction, ResetMode::kToZero}) {
      NeuronConfig cfg;
      cfg.kind = kind;
      cfg.reset_mode = reset;
      cfg.v_threshold = 0.6f;
      cfg.tau_m = kind == NeuronKind::kIF ? 1.0f : 2.5f;
      const auto in = oracle::random_matrix(steps, 1, 11, -0.3f, 0.9f);
      const auto up = oracle::random_matrix(steps, 1, 12);
      NeuronState s = make_state(1, 1, cfg);
      std::vector<StepTrace> traces;
      for (std::size_t t = 0; t < steps; ++t) {
        auto out = neuron_step(s, DenseMatrix(1, 1, {in(t, 0)}));
        traces.push_back(std::move(out.trace));
        s = std::move(out.state);
      }
      std::vector<double> d_in(steps);
      double d_tau = 0.0;
      DenseMatrix carry;
      for (std::size_t t = steps; t-- > 0;) {
        const auto g = neuron_backward(&traces[t], DenseMatrix(1, 1, {up(t, 0)}),
                                       t + 1 < steps ? &carry : nullptr);
        d_in[t] = g.d_input(0, 0);
        d_tau += g.d_tau;
        carry = g.d_prev_potential;
      }
      std::vector<double> in_d(steps), up_d(steps);
      for (std::size_t t = 0; t < steps; ++t) {
        in_d[t] = in(t, 0);
        up_d[t] = up(t, 0);
      }
      const auto ref = scalar_bptt(cfg, in_d, up_d);
      CHECK(oracle::rel_error(d_in, ref.d_input) < 1e-4);
      if (kind != NeuronKind::kIF) CHECK(d_tau == doctest::Approx(ref.d_tau).epsilon(1e-4));
    }
  }
}

TEST_CASE("tau gradient matches finite differences of the sub-threshold dynamics") {
  // Below threshold there is no reset, so V_T is smooth in tau.
  NeuronConfig cfg;
  cfg.kind = NeuronKind::kLIF;
  cfg.v_threshold = 100.0f;
  cfg.surrogate_alpha = 1.0f;  // σ′ vanishes this far below threshold
  const auto in = oracle::random_matrix(8, 1, 5, 0.0f, 1.0f);
  auto final_v = [&](double tau) {
    double v = 0.0;
    for (std::size_t t = 0; t < 8; ++t) v += (in(t, 0) - v) / tau;
    return v;
  };
  cfg.tau_m = 3.0f;
  NeuronState s = make_state(1, 1, cfg);
  std::vector<StepTrace> traces;
  for (std::size_t t = 0; t < 8; ++t) {
    auto out = neuron_step(s, DenseMatrix(1, 1, {in(t, 0)}));
    traces.push_back(std::move(out.trace));
    s = std::move(out.state);
  }
  // Seed ∂L/∂V_T = 1 through the carried potential of a virtual next step.
  DenseMatrix carry(1, 1, {1.0f});
  double d_tau = 0.0;
  for (std::size_t t = 8; t-- > 0;) {
    const auto g = neuron_backward(&traces[t], DenseMatrix(1, 1), &carry);
    d_tau += g.d_tau;
    carry = g.d_prev_potential;
  }
  const double fd = (final_v(3.0 + 1e-5) - final_v(3.0 - 1e-5)) / 2e-5;
  CHECK(d_tau == doctest::Approx(fd).epsilon(1e-3));
}

}  // TEST_SUITE
