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

#include "sgcl/bits.hpp"
#include "sgcl/dense.hpp"

namespace sgcl {

struct ContrastConfig {
  float margin = 1.0f;  // validated to [0, 2]
  double edge_drop_p = 0.5;
  bool feature_shuffle = true;  // false keeps the identity permutation
  std::uint64_t seed = 0;
};

void validate(const ContrastConfig& cfg);

// Scalar scoring head g(z) = z·w + b with w: k×1, b: 1×1.
struct PredictorParams {
  ParamTensor w;
  ParamTensor b{1, 1};
};

PredictorParams init_predictor(std::size_t k, std::uint64_t seed);

struct ShuffledFeatures {
  DenseMatrix x;
  std::vector<std::size_t> perm;  // output column j = input column perm[j]
};

ShuffledFeatures shuffle_features(const DenseMatrix& x, std::uint64_t seed);
DenseMatrix permute_columns(const DenseMatrix& x, std::span<const std::size_t> perm);

// score(u) = Σ_{j: z_uj = 1} w_j + b, summing only the rows of w selected by
// set bits.
std::vector<float> predictor_score(const BitMatrix& z, const PredictorParams& p);

// Accumulates dw_j += Σ_{u: z_uj = 1} d_scores[u] and db += Σ d_scores into
// the parameter gradients. Returns the gradient on z (treated as real
// valued): dz_uj = d_scores[u]·w_j.
DenseMatrix predictor_backward(const BitMatrix& z, std::span<const float> d_scores,
                               PredictorParams& p);

struct MarginLoss {
  double loss = 0.0;
  std::vector<float> d_pos;
  std::vector<float> d_neg;
};

// J = (1/N) Σ_u max(0, pos_u − neg_u + m). The subgradient is ±1/N where the
// hinge is strictly active and 0 elsewhere, including at the kink.
MarginLoss mrl_loss(std::span<const float> pos, std::span<const float> neg, float margin);

}  // namespace sgcl
