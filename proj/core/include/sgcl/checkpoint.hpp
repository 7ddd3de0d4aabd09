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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sgcl/dense.hpp"

namespace sgcl {

// Sectioned tensor container:
//   "SGCL" | u8 version | u32 count | count × {u32 name_len, name,
//   u32 rows, u32 cols, rows·cols × f32}
// All integers and floats little-endian.
inline constexpr char kCheckpointMagic[4] = {'S', 'G', 'C', 'L'};
inline constexpr std::uint8_t kCheckpointVersion = 1;

class TensorArchive {
 public:
  void put(std::string name, DenseMatrix m);
  bool contains(const std::string& name) const;
  // Throws ErrorKind::kData when the tensor is absent.
  const DenseMatrix& get(const std::string& name) const;

  const std::vector<std::pair<std::string, DenseMatrix>>& entries() const { return entries_; }

  std::vector<std::uint8_t> serialize() const;
  static TensorArchive deserialize(std::span<const std::uint8_t> bytes);

  void write(const std::filesystem::path& file) const;
  static TensorArchive read(const std::filesystem::path& file);

 private:
  std::vector<std::pair<std::string, DenseMatrix>> entries_;
};

// Little-endian helpers shared by the binary formats.
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_f32(std::vector<std::uint8_t>& out, float v);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& file);
void write_file_bytes(const std::filesystem::path& file, std::span<const std::uint8_t> bytes);

// Bounds-checked little-endian reader; throws ErrorKind::kData on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  std::span<const std::uint8_t> take(std::size_t n);
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace sgcl
