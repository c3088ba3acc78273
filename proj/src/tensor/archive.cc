// src/tensor/archive.cc

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

#include "tensor/archive.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace lipmel {

static_assert(std::endian::native == std::endian::little,
              "archive I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'L', 'I', 'P', 'M', 'E', 'L', 'A', 'R'};

template <typename T>
void append(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

  template <typename T>
  T read() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, b_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> v(b_.begin() + pos_, b_.begin() + pos_ + n);
    pos_ += n;
    return v;
  }

  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > b_.size()) throw ParseError("archive truncated");
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t dtype_size(DType d) {
  switch (d) {
    case DType::kF32: return 4;
    case DType::kF64: return 8;
    case DType::kU8: return 1;
    case DType::kI64: return 8;
  }
  throw ParseError("unknown dtype tag " + std::to_string(int(d)));
}

void Archive::put(ArchiveEntry e) {
  for (auto& existing : entries_)
    if (existing.name == e.name) {
      existing = std::move(e);
      return;
    }
  entries_.push_back(std::move(e));
}

void Archive::put_tensor(const std::string& name, const Tensor& t) {
  ArchiveEntry e;
  e.name = name;
  e.dtype = kDoublePrecision ? DType::kF64 : DType::kF32;
  for (Index d : t.shape()) e.dims.push_back(static_cast<std::uint64_t>(d));
  e.raw.resize(t.data().size() * sizeof(Real));
  std::memcpy(e.raw.data(), t.data().data(), e.raw.size());
  put(std::move(e));
}

void Archive::put_bytes(const std::string& name, const std::string& bytes) {
  ArchiveEntry e;
  e.name = name;
  e.dtype = DType::kU8;
  e.dims = {bytes.size()};
  e.raw.assign(bytes.begin(), bytes.end());
  put(std::move(e));
}

void Archive::put_i64(const std::string& name, std::int64_t v) {
  ArchiveEntry e;
  e.name = name;
  e.dtype = DType::kI64;
  e.dims = {1};
  append(e.raw, v);
  put(std::move(e));
}

void Archive::put_f64(const std::string& name, double v) {
  ArchiveEntry e;
  e.name = name;
  e.dtype = DType::kF64;
  e.dims = {1};
  append(e.raw, v);
  put(std::move(e));
}

bool Archive::has(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

const ArchiveEntry& Archive::entry(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  throw ParseError("archive has no entry '" + name + "'");
}

Tensor Archive::get_tensor(const std::string& name) const {
  const ArchiveEntry& e = entry(name);
  Shape shape;
  for (auto d : e.dims) shape.push_back(static_cast<Index>(d));
  const std::size_t n = static_cast<std::size_t>(shape_numel(shape));
  std::vector<Real> v(n);
  if (e.dtype == DType::kF64) {
    for (std::size_t i = 0; i < n; ++i) {
      double x;
      std::memcpy(&x, e.raw.data() + 8 * i, 8);
      v[i] = static_cast<Real>(x);
    }
  } else if (e.dtype == DType::kF32) {
    for (std::size_t i = 0; i < n; ++i) {
      float x;
      std::memcpy(&x, e.raw.data() + 4 * i, 4);
      v[i] = static_cast<Real>(x);
    }
  } else {
    throw ParseError("entry '" + name + "' is not a real tensor");
  }
  return Tensor::from(shape, std::move(v));
}

std::string Archive::get_bytes(const std::string& name) const {
  const ArchiveEntry& e = entry(name);
  if (e.dtype != DType::kU8)
    throw ParseError("entry '" + name + "' is not a byte string");
  return std::string(e.raw.begin(), e.raw.end());
}

std::int64_t Archive::get_i64(const std::string& name) const {
  const ArchiveEntry& e = entry(name);
  if (e.dtype != DType::kI64 || e.raw.size() != 8)
    throw ParseError("entry '" + name + "' is not an i64 scalar");
  std::int64_t v;
  std::memcpy(&v, e.raw.data(), 8);
  return v;
}

double Archive::get_f64(const std::string& name) const {
  const ArchiveEntry& e = entry(name);
  if (e.dtype != DType::kF64 || e.raw.size() != 8)
    throw ParseError("entry '" + name + "' is not an f64 scalar");
  double v;
  std::memcpy(&v, e.raw.data(), 8);
  return v;
}

std::vector<std::uint8_t> Archive::serialize() const {
  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  append(out, kFormatVersion);
  append(out, config_hash);
  append(out, static_cast<std::uint32_t>(config_text.size()));
  out.insert(out.end(), config_text.begin(), config_text.end());
  append(out, static_cast<std::uint32_t>(entries_.size()));
  for (const auto& e : entries_) {
    append(out, static_cast<std::uint32_t>(e.name.size()));
    out.insert(out.end(), e.name.begin(), e.name.end());
    append(out, static_cast<std::uint8_t>(e.dtype));
    append(out, static_cast<std::uint32_t>(e.dims.size()));
    for (auto d : e.dims) append(out, d);
    out.insert(out.end(), e.raw.begin(), e.raw.end());
  }
  return out;
}

Archive Archive::parse(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw ParseError("not a lipmel archive (bad magic)");
  std::vector<std::uint8_t> body(bytes.begin() + 8, bytes.end());
  Reader r(body);
  const auto version = r.read<std::uint32_t>();
  if (version != kFormatVersion)
    throw ParseError("unsupported archive version " + std::to_string(version));
  Archive a;
  a.config_hash = r.read<std::uint64_t>();
  const auto text_len = r.read<std::uint32_t>();
  auto text = r.bytes(text_len);
  a.config_text.assign(text.begin(), text.end());
  const auto n = r.read<std::uint32_t>();
  for (std::uint32_t k = 0; k < n; ++k) {
    ArchiveEntry e;
    const auto name_len = r.read<std::uint32_t>();
    auto name = r.bytes(name_len);
    e.name.assign(name.begin(), name.end());
    e.dtype = static_cast<DType>(r.read<std::uint8_t>());
    const auto ndim = r.read<std::uint32_t>();
    std::uint64_t count = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      e.dims.push_back(r.read<std::uint64_t>());
      count *= e.dims.back();
    }
    e.raw = r.bytes(count * dtype_size(e.dtype));
    a.entries_.push_back(std::move(e));
  }
  if (!r.done()) throw ParseError("trailing bytes after archive entries");
  return a;
}

void Archive::save(const std::string& path) const {
  write_file_bytes(path, serialize());
}

Archive Archive::load(const std::string& path) {
  return parse(read_file_bytes(path));
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::string& path,
                      const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace lipmel
