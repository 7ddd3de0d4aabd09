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

#include "sgcl/encoder.hpp"

#include <cstring>

#include "sgcl/checkpoint.hpp"
#include "sgcl/error.hpp"
#include "sgcl/kernels.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

std::vector<std::size_t> group_widths(std::size_t d, std::size_t t_steps) {
  require(t_steps >= 1, ErrorKind::kArgument, "partition: T must be >= 1");
  require(t_steps <= d, ErrorKind::kArgument,
          "partition: T = " + std::to_string(t_steps) + " exceeds feature width " +
              std::to_string(d) + " (empty group)");
  const std::size_t base = d / t_steps;
  std::vector<std::size_t> widths(t_steps, base);
  widths.back() = d - base * (t_steps - 1);
  return widths;
}

FeatureGroups partition_features(const DenseMatrix& x, std::size_t t_steps) {
  const auto widths = group_widths(x.cols(), t_steps);
  FeatureGroups fg;
  fg.groups.reserve(t_steps);
  std::size_t begin = 0;
  for (auto w : widths) {
    fg.groups.push_back(column_slice(x, begin, begin + w));
    begin += w;
  }
  return fg;
}

DenseMatrix merge_groups(const FeatureGroups& fg) { return hconcat(fg.groups); }

NeuronConfig EncoderParams::effective_neuron() const {
  NeuronConfig cfg = neuron;
  if (cfg.kind == NeuronKind::kPLIF) cfg.tau_m = plif_tau(tau_raw.value(0, 0));
  return cfg;
}

EncoderParams init_encoder(std::span<const std::size_t> widths, std::size_t hidden,
                           std::size_t depth, const NeuronConfig& neuron,
                           std::uint64_t seed) {
  require(!widths.empty(), ErrorKind::kConfig, "encoder: need at least one time step");
  require(hidden >= 1, ErrorKind::kConfig, "encoder: hidden width must be >= 1");
  require(depth >= 1, ErrorKind::kConfig, "encoder: depth must be >= 1");
  validate(neuron);
  EncoderParams p;
  p.neuron = neuron;
  p.depth = depth;
  p.hidden = hidden;
  for (std::size_t t = 0; t < widths.size(); ++t) {
    p.first_weights.push_back(init_normal(widths[t], hidden, derive_seed(seed, t)));
    p.first_bias.emplace_back(1, hidden);
  }
  for (std::size_t l = 1; l < depth; ++l)
    p.shared_weights.push_back(init_normal(hidden, hidden, derive_seed(seed, 100000 + l)));
  return p;
}

EncodedStep encode_step(const CsrGraph& g, const NormCoeffs& coeffs,
                        const DenseMatrix& group_t, const EncoderParams& params,
                        std::size_t t, const NeuronState& state) {
  require(t < params.steps(), ErrorKind::kArgument,
          "encode_step: step " + std::to_string(t) + " of " + std::to_string(params.steps()));
  const auto& w1 = params.first_weights[t];
  require(group_t.cols() == w1.rows(), ErrorKind::kDimension,
          "encode_step: group " + shape_str(group_t) + " for first layer " +
              shape_str(w1.value));
  require(state.potential.rows() == g.num_nodes && state.potential.cols() == params.hidden,
          ErrorKind::kDimension, "encode_step: neuron state " + shape_str(state.potential));

  EncodedStep out;
  auto& cache = out.cache;
  const std::size_t depth = params.depth;

  cache.layer_inputs.push_back(group_t);
  DenseMatrix a = spmm(coeffs, g, linear(group_t, w1, nullptr));
  add_row_bias(a, params.first_bias[t]);
  DenseMatrix h = depth > 1 ? relu(a) : a;
  cache.pre_act.push_back(std::move(a));
  for (std::size_t l = 1; l < depth; ++l) {
    cache.layer_inputs.push_back(h);
    DenseMatrix al = spmm(coeffs, g, linear(h, params.shared_weights[l - 1], nullptr));
    h = l + 1 < depth ? relu(al) : al;
    cache.pre_act.push_back(std::move(al));
  }

  NeuronState s{state.potential, params.effective_neuron()};
  auto step = neuron_step(s, h);
  out.spikes = std::move(step.spikes);
  out.state = std::move(step.state);
  cache.neuron = std::move(step.trace);
  out.hidden = std::move(h);
  return out;
}

void encoder_step_backward(const CsrGraph& g, const NormCoeffs& coeffs,
                           EncoderParams& params, std::size_t t,
                           const StepCache& cache, const DenseMatrix& d_hidden) {
  const std::size_t depth = params.depth;
  require(cache.pre_act.size() == depth && cache.layer_inputs.size() == depth,
          ErrorKind::kUsage, "encoder_step_backward: cache does not match depth");
  DenseMatrix dh = d_hidden;
  for (std::size_t l = depth - 1; l >= 1; --l) {
    const DenseMatrix da = l + 1 < depth ? relu_backward(cache.pre_act[l], dh) : dh;
    dh = linear_backward(cache.layer_inputs[l], spmm_backward(coeffs, g, da),
                         params.shared_weights[l - 1], nullptr);
  }
  const DenseMatrix da = depth > 1 ? relu_backward(cache.pre_act[0], dh) : dh;
  add_row_bias_backward(da, params.first_bias[t]);
  linear_backward(cache.layer_inputs[0], spmm_backward(coeffs, g, da),
                  params.first_weights[t], nullptr);
}

std::vector<std::size_t> SpikeTrain::spike_counts() const {
  std::vector<std::size_t> counts;
  counts.reserve(steps.size());
  for (const auto& s : steps) counts.push_back(s.count_ones());
  return counts;
}

SpikeTrain encode(const CsrGraph& g, const NormCoeffs& coeffs, const FeatureGroups& groups,
                  const EncoderParams& params) {
  require(groups.steps() == params.steps(), ErrorKind::kDimension,
          "encode: " + std::to_string(groups.steps()) + " feature groups for " +
              std::to_string(params.steps()) + " encoder steps");
  SpikeTrain train;
  NeuronState state = make_state(g.num_nodes, params.hidden, params.effective_neuron());
  for (std::size_t t = 0; t < params.steps(); ++t) {
    auto step = encode_step(g, coeffs, groups.groups[t], params, t, state);
    train.steps.push_back(std::move(step.spikes));
    state = std::move(step.state);
  }
  return train;
}

BitMatrix concat_pool(const SpikeTrain& train) { return hconcat_bits(train.steps); }

DenseMatrix firing_rate(const SpikeTrain& train) {
  require(train.t() >= 1, ErrorKind::kArgument, "firing_rate: empty spike train");
  DenseMatrix rate(train.n(), train.k());
  for (const auto& s : train.steps)
    for (std::size_t r = 0; r < s.rows(); ++r)
      for (std::size_t c = 0; c < s.cols(); ++c)
        if (s.get(r, c)) rate(r, c) += 1.0f;
  const float inv_t = 1.0f / static_cast<float>(train.t());
  for (float& v : rate.data()) v *= inv_t;
  return rate;
}

namespace {
constexpr char kEmbeddingMagic[4] = {'S', 'G', 'C', 'B'};
constexpr std::uint8_t kEmbeddingVersion = 1;
}  // namespace

std::vector<std::uint8_t> serialize_embeddings(const BitMatrix& z, std::size_t t,
                                               std::size_t k) {
  require(z.cols() == t * k, ErrorKind::kDimension,
          "embeddings: width " + std::to_string(z.cols()) + " != T·k = " +
              std::to_string(t * k));
  std::vector<std::uint8_t> out(std::begin(kEmbeddingMagic), std::end(kEmbeddingMagic));
  out.reserve(kEmbeddingHeaderBytes + z.rows() * z.packed_row_bytes());
  out.push_back(kEmbeddingVersion);
  put_u64(out, z.rows());
  put_u32(out, static_cast<std::uint32_t>(t));
  put_u32(out, static_cast<std::uint32_t>(k));
  for (std::size_t r = 0; r < z.rows(); ++r) z.write_row_bytes(r, out);
  return out;
}

EmbeddingFile deserialize_embeddings(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), kEmbeddingMagic, 4) != 0)
    fail(ErrorKind::kData, "not an SGCB embedding file (bad magic)");
  const auto version = r.u8();
  if (version != kEmbeddingVersion)
    fail(ErrorKind::kData, "unsupported embedding version " + std::to_string(version));
  EmbeddingFile f;
  const auto n = r.u64();
  f.t = r.u32();
  f.k = r.u32();
  f.z = BitMatrix(n, f.t * f.k);
  const std::size_t row_bytes = f.z.packed_row_bytes();
  if (r.remaining() != n * row_bytes)
    fail(ErrorKind::kData, "embedding payload has " + std::to_string(r.remaining()) +
                               " bytes, expected " + std::to_string(n * row_bytes));
  for (std::size_t i = 0; i < n; ++i) f.z.read_row_bytes(i, r.take(row_bytes));
  return f;
}

void write_embeddings(const std::filesystem::path& file, const BitMatrix& z, std::size_t t,
                      std::size_t k) {
  write_file_bytes(file, serialize_embeddings(z, t, k));
}

EmbeddingFile read_embeddings(const std::filesystem::path& file) {
  return deserialize_embeddings(read_file_bytes(file));
}

}  // namespace sgcl
