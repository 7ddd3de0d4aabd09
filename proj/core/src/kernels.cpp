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

#include "sgcl/kernels.hpp"

#include <algorithm>

#include "sgcl/error.hpp"
#include "sgcl/parallel.hpp"

namespace sgcl {

DenseMatrix spmm(const NormCoeffs& coeffs, const CsrGraph& g, const DenseMatrix& x) {
  require(x.rows() == g.num_nodes, ErrorKind::kDimension,
          "spmm: x has " + std::to_string(x.rows()) + " rows for " +
              std::to_string(g.num_nodes) + " nodes");
  require(coeffs.values.size() == g.col_idx.size() &&
              coeffs.self_term.size() == g.num_nodes,
          ErrorKind::kDimension, "spmm: coefficients do not match graph");
  check_finite(x, "spmm input");
  DenseMatrix out(x.rows(), x.cols());
  const std::size_t k = x.cols();
  parallel_for(0, g.num_nodes, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t u = lo; u < hi; ++u) {
      float* o = out.row(u).data();
      const float* xu = x.row(u).data();
      const float s = coeffs.self_term[u];
      for (std::size_t j = 0; j < k; ++j) o[j] = s * xu[j];
      for (std::size_t e = g.row_ptr[u]; e < g.row_ptr[u + 1]; ++e) {
        const float a = coeffs.values[e];
        const float* xv = x.row(g.col_idx[e]).data();
        for (std::size_t j = 0; j < k; ++j) o[j] += a * xv[j];
      }
    }
  });
  return out;
}

DenseMatrix spmm_backward(const NormCoeffs& coeffs, const CsrGraph& g,
                          const DenseMatrix& d_out) {
  return spmm(coeffs, g, d_out);
}

DenseMatrix linear(const DenseMatrix& x, const ParamTensor& w, const ParamTensor* b) {
  require(x.cols() == w.rows(), ErrorKind::kDimension,
          "linear: x " + shape_str(x) + " vs W " + shape_str(w.value));
  check_finite(x, "linear input");
  DenseMatrix out = matmul(x, w.value);
  if (b) add_row_bias(out, *b);
  return out;
}

DenseMatrix linear_backward(const DenseMatrix& x, const DenseMatrix& d_out,
                            ParamTensor& w, ParamTensor* b) {
  require(d_out.rows() == x.rows() && d_out.cols() == w.cols(), ErrorKind::kDimension,
          "linear_backward: d_out " + shape_str(d_out) + " for x " + shape_str(x) +
              " and W " + shape_str(w.value));
  check_finite(d_out, "linear_backward upstream");
  axpy(1.0f, matmul_transposed_a(x, d_out), w.grad);
  if (b) add_row_bias_backward(d_out, *b);
  return matmul_transposed_b(d_out, w.value);
}

void add_row_bias(DenseMatrix& x, const ParamTensor& b) {
  require(b.rows() == 1 && b.cols() == x.cols(), ErrorKind::kDimension,
          "bias " + shape_str(b.value) + " for " + shape_str(x));
  const auto bias = b.value.row(0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = x.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += bias[j];
  }
}

void add_row_bias_backward(const DenseMatrix& d_out, ParamTensor& b) {
  require(b.rows() == 1 && b.cols() == d_out.cols(), ErrorKind::kDimension,
          "bias " + shape_str(b.value) + " for gradient " + shape_str(d_out));
  auto g = b.grad.row(0);
  for (std::size_t i = 0; i < d_out.rows(); ++i) {
    const auto r = d_out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) g[j] += r[j];
  }
}

DenseMatrix relu(const DenseMatrix& x) {
  DenseMatrix out = x;
  for (float& v : out.data()) v = std::max(v, 0.0f);
  return out;
}

DenseMatrix relu_backward(const DenseMatrix& x, const DenseMatrix& d_out) {
  check_same_shape(x, d_out, "relu_backward");
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i)
    out.data()[i] = x.data()[i] > 0.0f ? d_out.data()[i] : 0.0f;
  return out;
}

}  // namespace sgcl
