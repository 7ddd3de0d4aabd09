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

#include "sgcl/dense.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sgcl/error.hpp"
#include "sgcl/parallel.hpp"

namespace sgcl {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows_ * cols_, ErrorKind::kDimension,
          "DenseMatrix: data length " + std::to_string(data_.size()) +
              " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0f;
  return m;
}

void DenseMatrix::fill(float v) { std::fill(data_.begin(), data_.end(), v); }

std::string shape_str(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_finite(const DenseMatrix& m, const std::string& where) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i])) {
      fail(ErrorKind::kNumeric, where + ": non-finite entry at (" +
                                    std::to_string(i / std::max<std::size_t>(1, m.cols())) +
                                    ", " + std::to_string(i % std::max<std::size_t>(1, m.cols())) +
                                    ")");
    }
  }
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                      const std::string& where) {
  require(a.same_shape(b), ErrorKind::kDimension,
          where + ": shape " + shape_str(a) + " vs " + shape_str(b));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), ErrorKind::kDimension,
          "matmul: " + shape_str(a) + " * " + shape_str(b));
  DenseMatrix out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  parallel_for(0, a.rows(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      float* o = out.row(i).data();
      const float* ar = a.row(i).data();
      for (std::size_t p = 0; p < inner; ++p) {
        const float s = ar[p];
        if (s == 0.0f) continue;
        const float* br = b.row(p).data();
        for (std::size_t j = 0; j < n; ++j) o[j] += s * br[j];
      }
    }
  });
  return out;
}

DenseMatrix matmul_transposed_a(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(), ErrorKind::kDimension,
          "matmul_transposed_a: " + shape_str(a) + "^T * " + shape_str(b));
  DenseMatrix out(a.cols(), b.cols());
  const std::size_t n = b.cols();
  // Parallel over output rows; the reduction over a.rows() runs in a fixed order.
  parallel_for(0, a.cols(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const float* br = b.row(r).data();
      for (std::size_t i = lo; i < hi; ++i) {
        const float s = a(r, i);
        if (s == 0.0f) continue;
        float* o = out.row(i).data();
        for (std::size_t j = 0; j < n; ++j) o[j] += s * br[j];
      }
    }
  }, 8);
  return out;
}

DenseMatrix matmul_transposed_b(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.cols(), ErrorKind::kDimension,
          "matmul_transposed_b: " + shape_str(a) + " * " + shape_str(b) + "^T");
  DenseMatrix out(a.rows(), b.rows());
  parallel_for(0, a.rows(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto ar = a.row(i);
      for (std::size_t j = 0; j < b.rows(); ++j) {
        const auto br = b.row(j);
        float acc = 0.0f;
        for (std::size_t p = 0; p < ar.size(); ++p) acc += ar[p] * br[p];
        out(i, j) = acc;
      }
    }
  });
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

DenseMatrix column_slice(const DenseMatrix& a, std::size_t begin, std::size_t end) {
  require(begin <= end && end <= a.cols(), ErrorKind::kArgument,
          "column_slice: [" + std::to_string(begin) + ", " + std::to_string(end) +
              ") out of " + std::to_string(a.cols()) + " columns");
  DenseMatrix out(a.rows(), end - begin);
  for (std::size_t i = 0; i < a.rows(); ++i)
    std::copy(a.row(i).begin() + begin, a.row(i).begin() + end, out.row(i).begin());
  return out;
}

DenseMatrix hconcat(std::span<const DenseMatrix> blocks) {
  if (blocks.empty()) return {};
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    require(b.rows() == blocks.front().rows(), ErrorKind::kDimension,
            "hconcat: row count mismatch");
    cols += b.cols();
  }
  DenseMatrix out(blocks.front().rows(), cols);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto dst = out.row(i).begin();
    for (const auto& b : blocks) dst = std::copy(b.row(i).begin(), b.row(i).end(), dst);
  }
  return out;
}

void axpy(float alpha, const DenseMatrix& x, DenseMatrix& y) {
  check_same_shape(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] += alpha * x.data()[i];
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (float v : a.data()) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

ParamTensor::ParamTensor(DenseMatrix v)
    : value(std::move(v)),
      grad(value.rows(), value.cols()),
      adamw_m(value.rows(), value.cols()),
      adamw_v(value.rows(), value.cols()) {}

ParamTensor::ParamTensor(std::size_t rows, std::size_t cols)
    : ParamTensor(DenseMatrix(rows, cols)) {}

void ParamTensor::zero_grad() { grad.fill(0.0f); }

ParamTensor init_normal(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double std_dev = rows > 0 ? 1.0 / std::sqrt(static_cast<double>(rows)) : 1.0;
  std::normal_distribution<double> dist(0.0, std_dev);
  DenseMatrix v(rows, cols);
  for (float& x : v.data()) x = static_cast<float>(dist(rng));
  return ParamTensor(std::move(v));
}

}  // namespace sgcl
