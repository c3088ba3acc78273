// src/tensor/archive.h

// Copyright 2026  The lipmel Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LIPMEL_TENSOR_ARCHIVE_H_
#define LIPMEL_TENSOR_ARCHIVE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "tensor/tensor.h"

namespace lipmel {

// Flat archive of named entries behind a header carrying the format version,
// a configuration hash and the configuration text.
//
// Layout (all integers little-endian):
//   "LIPMELAR"  u32 version  u64 config_hash
//   u32 text_len  text bytes
//   u32 n_entries, then per entry:
//     u32 name_len  name (UTF-8)  u8 dtype  u32 ndim  u64 dims[ndim]  raw
enum class DType : std::uint8_t { kF32 = 1, kF64 = 2, kU8 = 3, kI64 = 4 };

std::size_t dtype_size(DType d);

struct ArchiveEntry {
  std::string name;
  DType dtype = DType::kF64;
  std::vector<std::uint64_t> dims;
  std::vector<std::uint8_t> raw;  // little-endian payload
};

class Archive {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint64_t config_hash = 0;
  std::string config_text;

  void put_tensor(const std::string& name, const Tensor& t);
  void put_bytes(const std::string& name, const std::string& bytes);
  void put_i64(const std::string& name, std::int64_t v);
  void put_f64(const std::string& name, double v);

  bool has(const std::string& name) const;
  const ArchiveEntry& entry(const std::string& name) const;
  Tensor get_tensor(const std::string& name) const;
  std::string get_bytes(const std::string& name) const;
  std::int64_t get_i64(const std::string& name) const;
  double get_f64(const std::string& name) const;

  const std::vector<ArchiveEntry>& entries() const { return entries_; }

  std::vector<std::uint8_t> serialize() const;
  static Archive parse(const std::vector<std::uint8_t>& bytes);

  void save(const std::string& path) const;
  static Archive load(const std::string& path);

 private:
  void put(ArchiveEntry e);
  std::vector<ArchiveEntry> entries_;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& text);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path,
                      const std::vector<std::uint8_t>& bytes);

}  // namespace lipmel

#endif  // LIPMEL_TENSOR_ARCHIVE_H_
