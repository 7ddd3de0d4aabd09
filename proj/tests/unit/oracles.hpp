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

// Reference implementations used only by the tests. They are written
// independently of the library: plain loops in double precision, dense
// matrices, no shared helpers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "sgcl/dense.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<double>(c, 0.0)); }

inline Mat from(const sgcl::DenseMatrix& m) {
  Mat out = zeros(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat out = zeros(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][p] * b[p][j];
  return out;
}

inline Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat out = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

// Â = D̃^{-1/2}(A + I)D̃^{-1/2} from an undirected edge list.
inline Mat normalized_adjacency(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::set<std::pair<int, int>> und;
  for (auto [u, v] : edges)
    if (u != v) und.insert({std::min(u, v), std::max(u, v)});
  std::vector<double> deg(n, 0.0);
  Mat a = zeros(n, n);
  for (auto [u, v] : und) {
    a[u][v] = a[v][u] = 1.0;
    deg[u] += 1;
    deg[v] += 1;
  }
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j] != 0.0) a[i][j] /= std::sqrt((deg[i] + 1) * (deg[j] + 1));
  return a;
}

inline double max_abs_diff(const Mat& a, const sgcl::DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b(i, j)));
  return m;
}

inline sgcl::DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed,
                                       float lo = -1.0f, float hi = 1.0f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(lo, hi);
  sgcl::DenseMatrix m(r, c);
  for (float& v : m.storage()) v = u(rng);
  return m;
}

// Relative error ‖a − b‖ / max(‖b‖, tiny).
inline double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

// Central differences of a scalar function of a float matrix.
inline std::vector<double> finite_diff(sgcl::DenseMatrix& x,
                                       const std::function<double()>& f, float eps = 1e-2f) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const float keep = x.data()[i];
    x.data()[i] = keep + eps;
    const double up = f();
    x.data()[i] = keep - eps;
    const double down = f();
    x.data()[i] = keep;
    g[i] = (up - down) / (2.0 * static_cast<double>(eps));
  }
  return g;
}

inline std::vector<double> flat(const sgcl::DenseMatrix& m) {
  return {m.data().begin(), m.data().end()};
}

// One-sided Jacobi SVD; returns singular values in descending order.
inline std::vector<double> singular_values(Mat a) {
  const std::size_t m = a.size(), n = a[0].size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += a[i][p] * a[i][p];
          beta += a[i][q] * a[i][q];
          gamma += a[i][p] * a[i][q];
        }
        off = std::max(off, std::abs(gamma) / std::sqrt(std::max(alpha * beta, 1e-300)));
        if (gamma == 0.0) continue;
        const double zeta = (beta - alpha) / (2 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t), s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = a[i][p], y = a[i][q];
          a[i][p] = c * x - s * y;
          a[i][q] = s * x + c * y;
        }
      }
    if (off < 1e-15) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a[i][j] * a[i][j];
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

// Linear CKA through explicit Gram matrices and double centering:
// HSIC(K, L) = tr(KHLH)/(n−1)², normalized.
inline double gram_cka(const sgcl::DenseMatrix& x, const sgcl::DenseMatrix& y) {
  const std::size_t n = x.rows();
  const Mat xm = from(x), ym = from(y);
  const Mat k = matmul(xm, transpose(xm)), l = matmul(ym, transpose(ym));
  auto center = [n](const Mat& g) {
    std::vector<double> row(n, 0.0), col(n, 0.0);
    double all = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        row[i] += g[i][j] / n;
        col[j] += g[i][j] / n;
        all += g[i][j] / (double(n) * n);
      }
    Mat c = g;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[i][j] = g[i][j] - row[i] - col[j] + all;
    return c;
  };
  const Mat kc = center(k), lc = center(l);
  auto hsic = [n](const Mat& a, const Mat& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += a[i][j] * b[i][j];
    return s / ((n - 1.0) * (n - 1.0));
  };
  return hsic(kc, lc) / std::sqrt(hsic(kc, kc) * hsic(lc, lc));
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace oracle
