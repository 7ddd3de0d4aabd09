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

#include <filesystem>
#include <vector>

#include "sgcl/bits.hpp"
#include "sgcl/dense.hpp"
#include "sgcl/graph.hpp"
#include "sgcl/neuron.hpp"

namespace sgcl {

// Contiguous, non-overlapping column blocks of the feature matrix, one per
// time step.
struct FeatureGroups {
  std::vector<DenseMatrix> groups;

  std::size_t steps() const { return groups.size(); }
};

// Widths of the T groups: d/T each when T divides d; otherwise d//T for the
// first T−1 groups and the remaining d − (T−1)·(d//T) columns for the last.
std::vector<std::size_t> group_widths(std::size_t d, std::size_t t_steps);

// Throws ErrorKind::kArgument when t_steps is 0 or exceeds d.
FeatureGroups partition_features(const DenseMatrix& x, std::size_t t_steps);
DenseMatrix merge_groups(const FeatureGroups& fg);

// T peer GCNs: step t owns its first layer (width_t → k, plus bias); layers
// 2..L are k×k and shared by all steps. One spiking neuron, shared across
// steps, binarizes the last layer's output.
struct EncoderParams {
  std::vector<ParamTensor> first_weights;
  std::vector<ParamTensor> first_bias;
  std::vector<ParamTensor> shared_weights;
  ParamTensor tau_raw{1, 1};  // PLIF only: tau_m = exp(raw)
  NeuronConfig neuron;
  std::size_t depth = 1;
  std::size_t hidden = 0;

  std::size_t steps() const { return first_weights.size(); }
  // Neuron config with tau_m taken from tau_raw for PLIF.
  NeuronConfig effective_neuron() const;
};

EncoderParams init_encoder(std::span<const std::size_t> widths, std::size_t hidden,
                           std::size_t depth, const NeuronConfig& neuron,
                           std::uint64_t seed);

// Forward values of one step needed by encoder_step_backward.
struct StepCache {
  std::vector<DenseMatrix> layer_inputs;  // input to layer l (group for l = 0)
  std::vector<DenseMatrix> pre_act;       // aggregated output of layer l
  StepTrace neuron;
};

struct EncodedStep {
  BitMatrix spikes;
  DenseMatrix hidden;  // H^t, the neuron's input current
  NeuronState state;
  StepCache cache;
};

// H^t = GCN_t(group_t); (S^t, state') = neuron_step(state, H^t).
// Layer 1: spmm(x·W¹_t) + b_t; layers 2..L: spmm(h·W^l). ReLU follows every
// layer except the last.
EncodedStep encode_step(const CsrGraph& g, const NormCoeffs& coeffs,
                        const DenseMatrix& group_t, const EncoderParams& params,
                        std::size_t t, const NeuronState& state);

// Backpropagates d_hidden (gradient on H^t) through the step's GCN,
// accumulating into first_weights[t], first_bias[t] and shared_weights.
void encoder_step_backward(const CsrGraph& g, const NormCoeffs& coeffs,
                           EncoderParams& params, std::size_t t,
                           const StepCache& cache, const DenseMatrix& d_hidden);

// T spike matrices of shape N×k.
struct SpikeTrain {
  std::vector<BitMatrix> steps;

  std::size_t t() const { return steps.size(); }
  std::size_t k() const { return steps.empty() ? 0 : steps.front().cols(); }
  std::size_t n() const { return steps.empty() ? 0 : steps.front().rows(); }
  std::vector<std::size_t> spike_counts() const;
};

// Runs all T steps from a resting state.
SpikeTrain encode(const CsrGraph& g, const NormCoeffs& coeffs, const FeatureGroups& groups,
                  const EncoderParams& params);

// Z = (S¹ ‖ … ‖ S^T), N × T·k bits.
BitMatrix concat_pool(const SpikeTrain& train);

// Mean of the T spike matrices.
DenseMatrix firing_rate(const SpikeTrain& train);

// Embedding file: "SGCB" | u8 version | u64 N | u32 T | u32 k | N rows of
// ceil(T·k/8) bytes, bit j of a row at byte j/8, bit j%8.
inline constexpr std::size_t kEmbeddingHeaderBytes = 4 + 1 + 8 + 4 + 4;

struct EmbeddingFile {
  BitMatrix z;
  std::size_t t = 0;
  std::size_t k = 0;
};

std::vector<std::uint8_t> serialize_embeddings(const BitMatrix& z, std::size_t t,
                                               std::size_t k);
EmbeddingFile deserialize_embeddings(std::span<const std::uint8_t> bytes);
void write_embeddings(const std::filesystem::path& file, const BitMatrix& z, std::size_t t,
                      std::size_t k);
EmbeddingFile read_embeddings(const std::filesystem::path& file);

}  // namespace sgcl
