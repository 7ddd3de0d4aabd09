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

#include "sgcl/bits.hpp"

#include <algorithm>
#include <bit>

#include "sgcl/error.hpp"

namespace sgcl {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64),
      words_(rows * ((cols + 63) / 64), 0) {}

std::size_t BitMatrix::count_ones() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitMatrix::count_ones_row(std::size_t r) const {
  std::size_t n = 0;
  for (auto w : row_words(r)) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void BitMatrix::write_row_bytes(std::size_t r, std::vector<std::uint8_t>& out) const {
  const auto words = row_words(r);
  for (std::size_t i = 0; i < packed_row_bytes(); ++i)
    out.push_back(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
}

void BitMatrix::read_row_bytes(std::size_t r, std::span<const std::uint8_t> bytes) {
  require(bytes.size() == packed_row_bytes(), ErrorKind::kData,
          "bit row has " + std::to_string(bytes.size()) + " bytes, expected " +
              std::to_string(packed_row_bytes()));
  auto words = row_words(r);
  std::fill(words.begin(), words.end(), 0);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    words[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
  // Padding bits past cols must stay clear.
  if (cols_ % 64 != 0 && words_per_row_ > 0)
    words[words_per_row_ - 1] &= (std::uint64_t{1} << (cols_ % 64)) - 1;
}

BitMatrix pack(const DenseMatrix& m) {
  BitMatrix b(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto words = b.row_words(r);
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0.0f) words[c / 64] |= std::uint64_t{1} << (c % 64);
  }
  return b;
}

DenseMatrix unpack(const BitMatrix& b) {
  DenseMatrix m(b.rows(), b.cols());
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) = b.get(r, c) ? 1.0f : 0.0f;
  return m;
}

BitMatrix hconcat_bits(std::span<const BitMatrix> blocks) {
  if (blocks.empty()) return {};
  std::size_t cols = 0;
  for (const auto& blk : blocks) {
    require(blk.rows() == blocks.front().rows(), ErrorKind::kDimension,
            "hconcat_bits: row count mismatch");
    cols += blk.cols();
  }
  BitMatrix out(blocks.front().rows(), cols);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    std::size_t offset = 0;
    for (const auto& blk : blocks) {
      for (std::size_t c = 0; c < blk.cols(); ++c)
        if (blk.get(r, c)) out.set(r, offset + c, true);
      offset += blk.cols();
    }
  }
  return out;
}

}  // namespace sgcl
