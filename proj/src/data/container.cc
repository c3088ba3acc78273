// src/data/container.cc

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

#include "data/container.h"

#include <cstring>

#include "base/error.h"
#include "tensor/archive.h"

namespace lipmel::data {

namespace {

constexpr char kMagic[8] = {'L', 'M', 'F', 'R', 'A', 'M', 'E', 'S'};

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

}  // namespace

std::vector<std::uint8_t> encode_container(const VideoClip& clip) {
  if (clip.pixels.size() != clip.frames * clip.frame_size())
    throw ShapeError("frame container: pixel count does not match T*H*W*C");
  std::vector<std::uint8_t> b(kMagic, kMagic + 8);
  put_u32(b, kContainerVersion);
  put_u32(b, clip.frames);
  put_u32(b, clip.height);
  put_u32(b, clip.width);
  put_u32(b, clip.channels);
  b.insert(b.end(), clip.pixels.begin(), clip.pixels.end());
  return b;
}

VideoClip decode_container(const std::vector<std::uint8_t>& b) {
  if (b.size() < 28 || std::memcmp(b.data(), kMagic, 8) != 0)
    throw ParseError("not a frame container");
  if (get_u32(b.data() + 8) != kContainerVersion)
    throw ParseError("unsupported frame container version " +
                     std::to_string(get_u32(b.data() + 8)));
  VideoClip c;
  c.frames = get_u32(b.data() + 12);
  c.height = get_u32(b.data() + 16);
  c.width = get_u32(b.data() + 20);
  c.channels = get_u32(b.data() + 24);
  if (c.channels != 1 && c.channels != 3)
    throw ParseError("frame container: channel count must be 1 or 3");
  const std::uint64_t expected =
      std::uint64_t(c.frames) * c.height * c.width * c.channels;
  if (b.size() - 28 != expected)
    throw ParseError("frame container: expected " + std::to_string(expected) +
                     " pixel bytes, found " + std::to_string(b.size() - 28));
  c.pixels.assign(b.begin() + 28, b.end());
  return c;
}

void write_container(const std::string& path, const VideoClip& clip) {
  write_file_bytes(path, encode_container(clip));
}

VideoClip read_container(const std::string& path) {
  try {
    return decode_container(read_file_bytes(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace lipmel::data
