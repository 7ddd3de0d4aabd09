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

#include "sgcl/analytics.hpp"

#include <cmath>
#include <numeric>

#include "sgcl/error.hpp"

namespace sgcl {

EnergyReport energy_spikegcl(std::size_t n, std::span<const std::size_t> widths,
                             std::span<const std::size_t> spike_counts) {
  require(widths.size() == spike_counts.size(), ErrorKind::kArgument,
          "energy: " + std::to_string(widths.size()) + " widths for " +
              std::to_string(spike_counts.size()) + " spike counts");
  EnergyReport r;
  for (std::size_t t = 0; t < widths.size(); ++t) {
    r.mac_count += static_cast<std::uint64_t>(n) * widths[t];
    r.spike_count += spike_counts[t];
  }
  const double mac_pj = kMacPicojoules * static_cast<double>(r.mac_count);
  const double sop_pj = kSopPicojoules * static_cast<double>(r.spike_count);
  r.e_encoding_mj = mac_pj * kPicojouleToMillijoule;
  r.e_spiking_mj = sop_pj * kPicojouleToMillijoule;
  r.total_mj = (mac_pj + sop_pj) * kPicojouleToMillijoule;
  return r;
}

EnergyReport energy_spikegcl(std::size_t n, std::size_t d,
                             std::span<const std::size_t> spike_counts) {
  const auto widths = group_widths(d, spike_counts.size());
  return energy_spikegcl(n, widths, spike_counts);
}

double energy_binary_gnn(std::size_t n, std::size_t edges, std::size_t d, std::size_t layers) {
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double per_layer = nn * dd * dd / 64.0 + 2.0 * nn * dd + static_cast<double>(edges) * dd;
  return static_cast<double>(layers) * kMacPicojoules * per_layer * kPicojouleToMillijoule;
}

double energy_full_precision(std::size_t n, std::size_t edges, std::size_t d_in,
                             std::size_t d_out, std::size_t layers) {
  const double macs = static_cast<double>(n) * static_cast<double>(d_in) * static_cast<double>(d_out) +
                      static_cast<double>(edges) * static_cast<double>(d_in) +
                      static_cast<double>(edges) * static_cast<double>(d_out);
  return static_cast<double>(layers) * kMacPicojoules * macs * kPicojouleToMillijoule;
}

namespace {

// Column-centered copy in double, row-major n×c.
std::vector<double> center(const DenseMatrix& m, double& raw_energy, double& centered_energy) {
  const std::size_t n = m.rows();
  const std::size_t c = m.cols();
  std::vector<double> out(n * c);
  raw_energy = 0.0;
  centered_energy = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += m(i, j);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = m(i, j);
      raw_energy += v * v;
      out[i * c + j] = v - mean;
      centered_energy += out[i * c + j] * out[i * c + j];
    }
  }
  return out;
}

// ‖AᵀB‖²_F for row-major n×p and n×q.
double cross_norm_sq(const std::vector<double>& a, std::size_t p, const std::vector<double>& b,
                     std::size_t q, std::size_t n) {
  std::vector<double> c(p * q, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < p; ++r) {
      const double av = a[i * p + r];
      if (av == 0.0) continue;
      for (std::size_t s = 0; s < q; ++s) c[r * q + s] += av * b[i * q + s];
    }
  double sum = 0.0;
  for (double v : c) sum += v * v;
  return sum;
}

}  // namespace

double cka(const DenseMatrix& x, const DenseMatrix& y) {
  require(x.rows() == y.rows(), ErrorKind::kDimension,
          "cka: " + shape_str(x) + " vs " + shape_str(y));
  require(x.rows() >= 2, ErrorKind::kArgument, "cka needs at least two rows");
  double x_raw = 0.0, x_cen = 0.0, y_raw = 0.0, y_cen = 0.0;
  const auto xc = center(x, x_raw, x_cen);
  const auto yc = center(y, y_raw, y_cen);
  // Centered energy that is only rounding noise counts as zero variance.
  if (x_cen <= 1e-12 * x_raw || x_cen == 0.0 || y_cen <= 1e-12 * y_raw || y_cen == 0.0)
    fail(ErrorKind::kNumeric, "cka undefined: an input has zero variance");
  const std::size_t n = x.rows();
  const double xy = cross_norm_sq(xc, x.cols(), yc, y.cols(), n);
  const double xx = cross_norm_sq(xc, x.cols(), xc, x.cols(), n);
  const double yy = cross_norm_sq(yc, y.cols(), yc, y.cols(), n);
  return xy / std::sqrt(xx * yy);
}

DenseMatrix cka_matrix(const FeatureGroups& features, const SpikeTrain& train) {
  require(features.steps() == train.t(), ErrorKind::kDimension,
          "cka_matrix: " + std::to_string(features.steps()) + " feature groups for " +
              std::to_string(train.t()) + " spike steps");
  const std::size_t t = train.t();
  std::vector<DenseMatrix> spikes;
  for (const auto& s : train.steps) spikes.push_back(unpack(s));
  DenseMatrix out(t, t);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) {
      try {
        out(i, j) = static_cast<float>(cka(features.groups[i], spikes[j]));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNumeric) throw;
        out(i, j) = 0.0f;
      }
    }
  return out;
}

double diagonal_dominance(const DenseMatrix& m) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::kDimension,
          "diagonal_dominance needs a non-empty square matrix");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    bool top = true;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (j != i && m(i, j) >= m(i, i)) top = false;
    hits += top;
  }
  return static_cast<double>(hits) / static_cast<double>(m.rows());
}

double sparsity(const SpikeTrain& train) {
  const double total = static_cast<double>(train.n()) * train.t() * train.k();
  if (total == 0.0) return 1.0;
  std::size_t ones = 0;
  for (const auto& s : train.steps) ones += s.count_ones();
  return 1.0 - static_cast<double>(ones) / total;
}

std::uint64_t packed_embedding_bytes(std::size_t n, std::size_t t, std::size_t k) {
  return static_cast<std::uint64_t>(n) * ((t * k + 7) / 8);
}

std::uint64_t dense_embedding_bytes(std::size_t n, std::size_t t, std::size_t k) {
  return static_cast<std::uint64_t>(n) * t * k * sizeof(float);
}

}  // namespace sgcl
