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

namespace sgcl {

// Bit-packed binary matrix. Column j of a row lives in word j/64 at bit j%64;
// each row is padded to a whole number of 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * words_per_row_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = words_[r * words_per_row_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
  }

  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }
  std::span<std::uint64_t> row_words(std::size_t r) {
    return {words_.data() + r * words_per_row_, words_per_row_};
  }

  std::size_t count_ones() const;
  std::size_t count_ones_row(std::size_t r) const;

  // Bytes per row in the on-disk layout: ceil(cols/8), little-endian bit order.
  std::size_t packed_row_bytes() const noexcept { return (cols_ + 7) / 8; }
  void write_row_bytes(std::size_t r, std::vector<std::uint8_t>& out) const;
  void read_row_bytes(std::size_t r, std::span<const std::uint8_t> bytes);

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
};

// Nonzero entries become 1.
BitMatrix pack(const DenseMatrix& m);
DenseMatrix unpack(const BitMatrix& b);

// Horizontal concatenation of equal-height bit matrices.
BitMatrix hconcat_bits(std::span<const BitMatrix> blocks);

}  // namespace sgcl
