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

#include "sgcl/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sgcl/error.hpp"
#include "sgcl/kernels.hpp"
#include "sgcl/rng.hpp"
#include "sgcl/synthetic.hpp"

namespace sgcl {

DenseMatrix oracle_forward(const CsrGraph& g, const OracleGcn& oracle) {
  require(oracle.depth() >= 1, ErrorKind::kArgument, "oracle needs at least one layer");
  require(g.features.cols() == oracle.weights.front().rows(), ErrorKind::kDimension,
          "oracle: features " + shape_str(g.features) + " vs W1 " +
              shape_str(oracle.weights.front()));
  const auto coeffs = sym_norm_coeffs(g);
  DenseMatrix h = g.features;
  for (const auto& w : oracle.weights) {
    require(h.cols() == w.rows(), ErrorKind::kDimension,
            "oracle: layer input " + shape_str(h) + " vs weight " + shape_str(w));
    h = relu(spmm(coeffs, g, matmul(h, w)));
  }
  return h;
}

double operator_norm(const DenseMatrix& w) {
  const std::size_t n = w.cols();
  if (n == 0 || w.rows() == 0) return 0.0;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> wv(w.rows());
  std::vector<double> next(n);
  double sigma = 0.0;
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(w(i, j)) * v[j];
      wv[i] = s;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += static_cast<double>(w(i, j)) * wv[i];
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      // Start vector orthogonal to the row space: restart from a basis vector.
      if (it == 0 && n > 1) {
        std::fill(v.begin(), v.end(), 0.0);
        v[0] = 1.0;
        continue;
      }
      return 0.0;
    }
    const double est = std::sqrt(norm);  // ‖WᵀW v‖ → σ² for unit v
    for (std::size_t j = 0; j < n; ++j) v[j] = next[j] / norm;
    const bool done = sigma > 0.0 && std::abs(est - sigma) <= 1e-6 * sigma;
    sigma = est;
    if (done) break;
  }
  return sigma;
}

EncoderParams construct_snn(const OracleGcn& oracle, std::size_t t_steps, float v_th) {
  require(oracle.depth() >= 1, ErrorKind::kArgument, "oracle needs at least one layer");
  const DenseMatrix& w1 = oracle.weights.front();
  const auto widths = group_widths(w1.rows(), t_steps);
  EncoderParams p;
  p.depth = oracle.depth();
  p.hidden = w1.cols();
  p.neuron.kind = NeuronKind::kIF;
  p.neuron.reset_mode = ResetMode::kBySubtraction;
  p.neuron.v_threshold = v_th;
  p.neuron.v_reset = 0.0f;
  validate(p.neuron);
  std::size_t row = 0;
  const auto scale = static_cast<float>(t_steps);
  for (std::size_t t = 0; t < t_steps; ++t) {
    DenseMatrix block(widths[t], p.hidden);
    for (std::size_t i = 0; i < widths[t]; ++i)
      for (std::size_t j = 0; j < p.hidden; ++j) block(i, j) = scale * w1(row + i, j);
    row += widths[t];
    p.first_weights.emplace_back(std::move(block));
    p.first_bias.emplace_back(1, p.hidden);
  }
  for (std::size_t l = 1; l < oracle.depth(); ++l) {
    DenseMatrix w = oracle.weights[l];
    for (float& x : w.storage()) x *= v_th;
    p.shared_weights.emplace_back(std::move(w));
  }
  return p;
}

namespace {

struct LayerAccum {
  NeuronState state;
  std::vector<double> current_sum;
  DenseMatrix spike_count;
};

void track_min(float& lo, const DenseMatrix& m) {
  for (float v : m.data()) lo = std::min(lo, v);
}

LayerTrace finish(const LayerAccum& acc) {
  LayerTrace lt;
  lt.current_sum = DenseMatrix(acc.state.potential.rows(), acc.state.potential.cols());
  auto& cs = lt.current_sum.storage();
  for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = static_cast<float>(acc.current_sum[i]);
  lt.spike_count = acc.spike_count;
  lt.final_potential = acc.state.potential;
  return lt;
}

// One step of a layer: integrate `current`, fire, reset; returns the spikes.
BitMatrix step_layer(LayerAccum& acc, const DenseMatrix& current, float& min_potential) {
  auto& cs = acc.current_sum;
  const auto in = current.data();
  for (std::size_t i = 0; i < cs.size(); ++i) cs[i] += in[i];
  auto out = neuron_step(acc.state, current);
  track_min(min_potential, out.trace.potential);
  track_min(min_potential, out.state.potential);
  auto& counts = acc.spike_count;
  for (std::size_t r = 0; r < counts.rows(); ++r)
    for (std::size_t c = 0; c < counts.cols(); ++c) counts(r, c) += out.spikes.get(r, c);
  acc.state = std::move(out.state);
  return std::move(out.spikes);
}

LayerAccum make_accum(std::size_t rows, std::size_t cols, const NeuronConfig& cfg) {
  return {make_state(rows, cols, cfg), std::vector<double>(rows * cols, 0.0),
          DenseMatrix(rows, cols)};
}

}  // namespace

RunTrace run_layered_snn(const CsrGraph& g, const EncoderParams& params) {
  const std::size_t t_steps = params.steps();
  require(t_steps >= 1, ErrorKind::kArgument, "run_layered_snn: no time steps");
  const auto groups = partition_features(g.features, t_steps);
  const auto coeffs = sym_norm_coeffs(g);
  const auto cfg = params.effective_neuron();
  RunTrace tr;
  tr.neuron = cfg;
  tr.steps = t_steps;
  std::vector<LayerAccum> layers;
  for (std::size_t l = 0; l < params.depth; ++l)
    layers.push_back(make_accum(g.num_nodes, params.hidden, cfg));

  for (std::size_t t = 0; t < t_steps; ++t) {
    DenseMatrix h = spmm(coeffs, g, linear(groups.groups[t], params.first_weights[t],
                                           &params.first_bias[t]));
    BitMatrix s = step_layer(layers[0], h, tr.min_potential);
    for (std::size_t l = 1; l < params.depth; ++l) {
      h = spmm(coeffs, g, linear(unpack(s), params.shared_weights[l - 1], nullptr));
      s = step_layer(layers[l], h, tr.min_potential);
    }
  }
  for (const auto& acc : layers) tr.layers.push_back(finish(acc));
  tr.rates = tr.layers.back().spike_count;
  for (float& x : tr.rates.storage()) x /= static_cast<float>(t_steps);
  return tr;
}

RunTrace run_currents(std::span<const DenseMatrix> currents, const NeuronConfig& cfg) {
  require(!currents.empty(), ErrorKind::kArgument, "run_currents: empty sequence");
  validate(cfg);
  RunTrace tr;
  tr.neuron = cfg;
  tr.steps = currents.size();
  auto acc = make_accum(currents.front().rows(), currents.front().cols(), cfg);
  for (const auto& c : currents) step_layer(acc, c, tr.min_potential);
  tr.layers.push_back(finish(acc));
  tr.rates = tr.layers.back().spike_count;
  for (float& x : tr.rates.storage()) x /= static_cast<float>(tr.steps);
  return tr;
}

ChargeIdentityReport charge_identity_check(const RunTrace& trace) {
  if (trace.neuron.kind != NeuronKind::kIF)
    fail(ErrorKind::kUsage, "charge_identity_check needs an IF trace, got " + to_string(trace.neuron.kind));
  ChargeIdentityReport rep;
  rep.reset_mode = trace.neuron.reset_mode;
  const double vth = trace.neuron.v_threshold;
  for (const auto& layer : trace.layers) {
    const auto v = layer.final_potential.data();
    const auto h = layer.current_sum.data();
    const auto n = layer.spike_count.data();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double r = std::abs(static_cast<double>(v[i]) - (h[i] - n[i] * vth));
      rep.max_residual = std::max(rep.max_residual, r);
    }
  }
  return rep;
}

double BoundReport::max_error() const {
  return node_error.empty() ? 0.0 : *std::max_element(node_error.begin(), node_error.end());
}

double BoundReport::median_error() const {
  if (node_error.empty()) return 0.0;
  auto e = node_error;
  const std::size_t mid = e.size() / 2;
  std::nth_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(mid), e.end());
  if (e.size() % 2 == 1) return e[mid];
  const double hi = e[mid];
  const double lo = *std::max_element(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

bool BoundReport::all_pass() const {
  return std::all_of(node_pass.begin(), node_pass.end(), [](bool b) { return b; });
}

double approximation_bound(std::size_t d, double kappa, std::size_t max_degree, double nu,
                           std::size_t depth, std::size_t t_steps) {
  const double t = static_cast<double>(t_steps);
  return std::sqrt(static_cast<double>(d)) * kappa *
         std::pow(std::sqrt(1.0 + static_cast<double>(max_degree)) * nu,
                  static_cast<double>(depth)) /
         (t * std::sqrt(t));
}

BoundReport verify_bound(const CsrGraph& g, const OracleGcn& oracle, std::size_t t_steps,
                         float v_th, ResetMode reset) {
  if (reset != ResetMode::kBySubtraction)
    fail(ErrorKind::kConfig,
         "the approximation bound only holds for reset by subtraction; got " + to_string(reset));
  require(t_steps >= 1 && t_steps <= g.features.cols(), ErrorKind::kConfig,
          "T must lie in [1, d]");
  const DenseMatrix z_star = oracle_forward(g, oracle);
  const EncoderParams snn = construct_snn(oracle, t_steps, v_th);
  const RunTrace tr = run_layered_snn(g, snn);

  BoundReport rep;
  rep.steps = t_steps;
  rep.feature_dim = g.features.cols();
  rep.max_degree = degree_bound(g);
  for (const auto& w : oracle.weights) rep.nu = std::max(rep.nu, operator_norm(w));
  rep.kappa = std::max(1.0, std::abs(static_cast<double>(tr.min_potential)) / v_th);
  rep.bound = approximation_bound(rep.feature_dim, rep.kappa, rep.max_degree, rep.nu,
                                  oracle.depth(), t_steps);
  for (std::size_t v = 0; v < g.num_nodes; ++v) {
    double sq = 0.0;
    for (std::size_t j = 0; j < z_star.cols(); ++j) {
      const double diff = static_cast<double>(tr.rates(v, j)) - z_star(v, j);
      sq += diff * diff;
    }
    rep.node_error.push_back(std::sqrt(sq));
    rep.node_pass.push_back(rep.node_error.back() <= rep.bound);
  }
  return rep;
}

BoundInstance make_bound_instance(std::size_t n, std::size_t max_degree, std::size_t depth,
                                      std::size_t d, std::size_t k, std::uint64_t seed) {
  require(depth >= 1 && d >= 1 && k >= 1, ErrorKind::kArgument,
          "bound instance needs depth, d and k >= 1");
  BoundInstance inst;
  inst.graph = random_bounded_degree_graph(n, max_degree, n * max_degree / 2, seed);
  std::mt19937_64 rng(derive_seed(seed, 31));
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  DenseMatrix x(n, d);
  for (float& v : x.storage()) v = unit(rng);
  inst.graph.features = std::move(x);

  const auto coeffs = sym_norm_coeffs(inst.graph);
  DenseMatrix h = inst.graph.features;
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t fan_in = l == 0 ? d : k;
    std::normal_distribution<float> gauss(0.0f, 0.8f / std::sqrt(static_cast<float>(fan_in)));
    DenseMatrix w(fan_in, k);
    for (float& v : w.storage()) v = l == 0 ? std::abs(gauss(rng)) : gauss(rng);
    DenseMatrix pre = spmm(coeffs, inst.graph, matmul(h, w));
    const float top = *std::max_element(pre.data().begin(), pre.data().end());
    if (top > 1.0f) {
      const float s = 1.0f / top;
      for (float& v : w.storage()) v *= s;
      for (float& v : pre.storage()) v *= s;
    }
    h = relu(pre);
    inst.oracle.weights.push_back(std::move(w));
  }
  return inst;
}

}  // namespace sgcl
