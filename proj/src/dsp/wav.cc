// src/dsp/wav.cc

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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dsp/audio.h"

namespace lipmel::dsp {

namespace {

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_u16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v & 0xff));
  b.push_back(static_cast<unsigned char>(v >> 8));
}
std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

void dump(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

AudioSignal normalize(const AudioSignal& audio) {
  if (audio.samples.empty()) throw ConfigError("normalize: empty audio");
  double peak = 0;
  for (double s : audio.samples) peak = std::max(peak, std::abs(s));
  AudioSignal out = audio;
  if (peak == 0) return out;
  for (double& s : out.samples) s /= peak;
  return out;
}

std::vector<unsigned char> encode_wav(const AudioSignal& audio) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<unsigned char> b;
  b.reserve(44 + data_bytes);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  put_u32(b, 36 + data_bytes);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, 1);  // mono
  put_u32(b, static_cast<std::uint32_t>(audio.sample_rate));
  put_u32(b, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  put_u16(b, 2);
  put_u16(b, 16);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  put_u32(b, data_bytes);
  for (double s : audio.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::lround(c * 32767.0));
    put_u16(b, static_cast<std::uint16_t>(v));
  }
  return b;
}

AudioSignal decode_wav(const std::vector<unsigned char>& b) {
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0)
    throw ParseError("not a RIFF/WAVE file");
  std::size_t pos = 12;
  bool have_fmt = false;
  AudioSignal out;
  while (pos + 8 <= b.size()) {
    const unsigned char* chunk = b.data() + pos;
    const std::uint32_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > b.size()) throw ParseError("WAV chunk overruns file");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw ParseError("WAV fmt chunk too short");
      const auto format = get_u16(b.data() + body);
      const auto channels = get_u16(b.data() + body + 2);
      const auto bits = get_u16(b.data() + body + 14);
      if (format != 1 || channels != 1 || bits != 16)
        throw ParseError("only mono 16-bit PCM WAV is supported");
      out.sample_rate = static_cast<int>(get_u32(b.data() + body + 4));
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw ParseError("WAV data chunk before fmt chunk");
      const std::size_t n = size / 2;
      out.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::int16_t>(get_u16(b.data() + body + 2 * i));
        out.samples[i] = v / 32767.0;
      }
      return out;
    }
    pos = body + size + (size & 1);
  }
  throw ParseError("WAV file has no data chunk");
}

AudioSignal read_wav(const std::string& path) {
  try {
    return decode_wav(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_wav(const std::string& path, const AudioSignal& audio) {
  dump(path, encode_wav(audio));
}

void write_matrix(const std::string& path, const MatrixFile& m) {
  if (m.values.size() != m.rows * m.cols)
    throw ShapeError("matrix file: value count does not match shape");
  std::vector<unsigned char> b;
  put_u32(b, MatrixFile::kVersion);
  put_u32(b, static_cast<std::uint32_t>(m.rows));
  put_u32(b, static_cast<std::uint32_t>(m.cols));
  for (float v : m.values) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(b, bits);
  }
  dump(path, b);
}

MatrixFile read_matrix(const std::string& path) {
  const auto b = slurp(path);
  if (b.size() < 12) throw ParseError(path + ": matrix header truncated");
  if (get_u32(b.data()) != MatrixFile::kVersion)
    throw ParseError(path + ": unsupported matrix version");
  MatrixFile m;
  m.rows = get_u32(b.data() + 4);
  m.cols = get_u32(b.data() + 8);
  if (b.size() != 12 + 4 * m.rows * m.cols)
    throw ParseError(path + ": matrix payload size mismatch");
  m.values.resize(m.rows * m.cols);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    const std::uint32_t bits = get_u32(b.data() + 12 + 4 * i);
    std::memcpy(&m.values[i], &bits, 4);
  }
  return m;
}

}  // namespace lipmel::dsp
