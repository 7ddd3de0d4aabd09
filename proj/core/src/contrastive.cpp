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

#include "sgcl/contrastive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "sgcl/error.hpp"

namespace sgcl {

void validate(const ContrastConfig& cfg) {
  require(std::isfinite(cfg.margin) && cfg.margin >= 0.0f && cfg.margin <= 2.0f,
          ErrorKind::kConfig, "margin must lie in [0, 2]");
  require(cfg.edge_drop_p >= 0.0 && cfg.edge_drop_p < 1.0, ErrorKind::kConfig,
          "edge_drop_p must lie in [0, 1)");
}

PredictorParams init_predictor(std::size_t k, std::uint64_t seed) {
  PredictorParams p;
  p.w = init_normal(k, 1, seed);
  return p;
}

ShuffledFeatures shuffle_features(const DenseMatrix& x, std::uint64_t seed) {
  require(x.cols() >= 1, ErrorKind::kArgument, "shuffle_features: no feature columns");
  ShuffledFeatures out;
  out.perm.resize(x.cols());
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  // Explicit Fisher-Yates so the permutation does not depend on the standard
  // library's std::shuffle.
  std::mt19937_64 rng(seed);
  for (std::size_t i = out.perm.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(out.perm[i], out.perm[j]);
  }
  out.x = permute_columns(x, out.perm);
  return out;
}

DenseMatrix permute_columns(const DenseMatrix& x, std::span<const std::size_t> perm) {
  require(perm.size() == x.cols(), ErrorKind::kDimension,
          "permute_columns: permutation length != column count");
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto src = x.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < perm.size(); ++j) dst[j] = src[perm[j]];
  }
  return out;
}

std::vector<float> predictor_score(const BitMatrix& z, const PredictorParams& p) {
  require(z.cols() == p.w.rows() && p.w.cols() == 1, ErrorKind::kDimension,
          "predictor_score: spikes " + std::to_string(z.cols()) + " wide, head " +
              shape_str(p.w.value));
  const auto w = p.w.value.data();
  const float b = p.b.value(0, 0);
  std::vector<float> scores(z.rows());
  for (std::size_t u = 0; u < z.rows(); ++u) {
    float s = 0.0f;
    const auto words = z.row_words(u);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      std::uint64_t bits = words[wi];
      while (bits) {
        const int j = std::countr_zero(bits);
        s += w[wi * 64 + static_cast<std::size_t>(j)];
        bits &= bits - 1;
      }
    }
    scores[u] = s + b;
  }
  return scores;
}

DenseMatrix predictor_backward(const BitMatrix& z, std::span<const float> d_scores,
                               PredictorParams& p) {
  require(z.rows() == d_scores.size(), ErrorKind::kDimension,
          "predictor_backward: score gradient length mismatch");
  require(z.cols() == p.w.rows(), ErrorKind::kDimension,
          "predictor_backward: spike width mismatch");
  auto dw = p.w.grad.data();
  float db = 0.0f;
  for (std::size_t u = 0; u < z.rows(); ++u) {
    const float g = d_scores[u];
    db += g;
    if (g == 0.0f) continue;
    const auto words = z.row_words(u);
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      std::uint64_t bits = words[wi];
      while (bits) {
        dw[wi * 64 + static_cast<std::size_t>(std::countr_zero(bits))] += g;
        bits &= bits - 1;
      }
    }
  }
  p.b.grad(0, 0) += db;

  DenseMatrix dz(z.rows(), z.cols());
  const auto w = p.w.value.data();
  for (std::size_t u = 0; u < z.rows(); ++u) {
    const float g = d_scores[u];
    if (g == 0.0f) continue;
    auto r = dz.row(u);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = g * w[j];
  }
  return dz;
}

MarginLoss mrl_loss(std::span<const float> pos, std::span<const float> neg, float margin) {
  require(pos.size() == neg.size(), ErrorKind::kDimension,
          "mrl_loss: " + std::to_string(pos.size()) + " positive vs " +
              std::to_string(neg.size()) + " negative scores");
  MarginLoss out;
  out.d_pos.assign(pos.size(), 0.0f);
  out.d_neg.assign(neg.size(), 0.0f);
  if (pos.empty()) return out;
  const double inv_n = 1.0 / static_cast<double>(pos.size());
  double total = 0.0;
  for (std::size_t u = 0; u < pos.size(); ++u) {
    const double h = static_cast<double>(pos[u]) - neg[u] + margin;
    if (h > 0.0) {
      total += h;
      out.d_pos[u] = static_cast<float>(inv_n);
      out.d_neg[u] = static_cast<float>(-inv_n);
    }
  }
  out.loss = total * inv_n;
  return out;
}

}  // namespace sgcl
