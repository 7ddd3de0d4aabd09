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

#include "sgcl/dense.hpp"
#include "sgcl/graph.hpp"

namespace sgcl {

// out[u] = self_term[u]·x[u] + Σ_{v∈N(u)} a_uv·x[v]
//
// The normalized adjacency is symmetric, so the gradient with respect to x is
// spmm applied to the upstream gradient with the same coefficients.
DenseMatrix spmm(const NormCoeffs& coeffs, const CsrGraph& g, const DenseMatrix& x);
DenseMatrix spmm_backward(const NormCoeffs& coeffs, const CsrGraph& g,
                          const DenseMatrix& d_out);

// out = x·W (+ b broadcast over rows when b is given). b is 1×cols(W).
DenseMatrix linear(const DenseMatrix& x, const ParamTensor& w, const ParamTensor* b);

// Accumulates dW += xᵀ·d_out and db += column-sum(d_out) into the parameter
// gradient buffers; returns dX = d_out·Wᵀ.
DenseMatrix linear_backward(const DenseMatrix& x, const DenseMatrix& d_out,
                            ParamTensor& w, ParamTensor* b);

void add_row_bias(DenseMatrix& x, const ParamTensor& b);
void add_row_bias_backward(const DenseMatrix& d_out, ParamTensor& b);

DenseMatrix relu(const DenseMatrix& x);
// Masks d_out by (x > 0), where x is the forward input.
DenseMatrix relu_backward(const DenseMatrix& x, const DenseMatrix& d_out);

}  // namespace sgcl
