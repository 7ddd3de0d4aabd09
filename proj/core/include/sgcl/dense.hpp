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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sgcl {

// Row-major 32-bit matrix. Every kernel boundary rejects NaN/Inf.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, float fill = 0.0f)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<float> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  std::vector<float>& storage() noexcept { return data_; }

  void fill(float v);
  bool same_shape(const DenseMatrix& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

std::string shape_str(const DenseMatrix& m);

// Throws ErrorKind::kNumeric naming `where` when any entry is NaN or Inf.
void check_finite(const DenseMatrix& m, const std::string& where);

// Throws ErrorKind::kDimension unless shapes agree.
void check_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                      const std::string& where);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_transposed_a(const DenseMatrix& a, const DenseMatrix& b);  // aᵀ·b
DenseMatrix matmul_transposed_b(const DenseMatrix& a, const DenseMatrix& b);  // a·bᵀ
DenseMatrix transpose(const DenseMatrix& a);

// Columns [begin, end) as a new matrix.
DenseMatrix column_slice(const DenseMatrix& a, std::size_t begin, std::size_t end);
DenseMatrix hconcat(std::span<const DenseMatrix> blocks);

void axpy(float alpha, const DenseMatrix& x, DenseMatrix& y);  // y += alpha·x
double frobenius_norm(const DenseMatrix& a);

// Trainable tensor with gradient buffer and AdamW moments.
struct ParamTensor {
  DenseMatrix value;
  DenseMatrix grad;
  DenseMatrix adamw_m;
  DenseMatrix adamw_v;
  std::int64_t step_count = 0;

  ParamTensor() = default;
  explicit ParamTensor(DenseMatrix v);
  ParamTensor(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return value.rows(); }
  std::size_t cols() const noexcept { return value.cols(); }
  void zero_grad();
};

// Zero-mean Gaussian with std 1/sqrt(fan_in) where fan_in = rows.
ParamTensor init_normal(std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace sgcl
