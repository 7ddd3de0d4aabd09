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
#include <span>
#include <vector>

#include "sgcl/dense.hpp"
#include "sgcl/encoder.hpp"

namespace sgcl {

inline constexpr double kMacPicojoules = 4.6;
inline constexpr double kSopPicojoules = 3.7;
inline constexpr double kPicojouleToMillijoule = 1e-9;

struct EnergyReport {
  double e_encoding_mj = 0.0;
  double e_spiking_mj = 0.0;
  double total_mj = 0.0;
  std::uint64_t spike_count = 0;
  std::uint64_t mac_count = 0;
};

// E = E_MAC·Σ_t N·d_t + E_SOP·Σ_t spikes_t. `widths` holds d_t per step.
// Throws kArgument when the two spans differ in length.
EnergyReport energy_spikegcl(std::size_t n, std::span<const std::size_t> widths,
                             std::span<const std::size_t> spike_counts);
// Same with the widths of a d-column feature matrix split into
// spike_counts.size() groups.
EnergyReport energy_spikegcl(std::size_t n, std::size_t d,
                             std::span<const std::size_t> spike_counts);

// Σ_layers E_MAC·(N·d²/64 + 2·N·d + |E|·d), in mJ.
double energy_binary_gnn(std::size_t n, std::size_t edges, std::size_t d, std::size_t layers);

// Σ_layers E_MAC·(N·d_in·d_out + |E|·d_in + |E|·d_out), in mJ.
double energy_full_precision(std::size_t n, std::size_t edges, std::size_t d_in,
                             std::size_t d_out, std::size_t layers);

// Linear CKA, ‖X̃ᵀỸ‖²_F / (‖X̃ᵀX̃‖_F·‖ỸᵀỸ‖_F) with column-centered X̃, Ỹ,
// which equals the biased HSIC form on the Gram matrices XXᵀ and YYᵀ.
// Throws kNumeric when either input has no variance.
double cka(const DenseMatrix& x, const DenseMatrix& y);

// T×T matrix of cka(X^t, S^{t'}). Pairs whose CKA is undefined (a constant
// spike matrix) are reported as 0.
DenseMatrix cka_matrix(const FeatureGroups& features, const SpikeTrain& train);

// Fraction of rows whose maximum sits on the diagonal.
double diagonal_dominance(const DenseMatrix& m);

// Fraction of zero entries over N·T·k; 1 for an empty train.
double sparsity(const SpikeTrain& train);

// Bytes of the packed embedding body versus an N×(T·k) float32 matrix.
std::uint64_t packed_embedding_bytes(std::size_t n, std::size_t t, std::size_t k);
std::uint64_t dense_embedding_bytes(std::size_t n, std::size_t t, std::size_t k);

}  // namespace sgcl
