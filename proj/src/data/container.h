// src/data/container.h

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

#ifndef LIPMEL_DATA_CONTAINER_H_
#define LIPMEL_DATA_CONTAINER_H_

#include <cstdint>
#include <string>
#include <vector>

namespace lipmel::data {

// Raw 8-bit video, frames stored T x H x W x C (channels interleaved).
struct VideoClip {
  std::uint32_t frames = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 1;
  std::vector<std::uint8_t> pixels;

  std::size_t frame_size() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
  std::uint8_t& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c = 0) {
    return pixels[((t * height + y) * width + x) * channels + c];
  }
  std::uint8_t at(std::size_t t, std::size_t y, std::size_t x, std::size_t c = 0) const {
    return pixels[((t * height + y) * width + x) * channels + c];
  }
};

// Container layout: "LMFRAMES" u32 version u32 T u32 H u32 W u32 C, then
// T*H*W*C bytes. Integers little-endian.
inline constexpr std::uint32_t kContainerVersion = 1;

std::vector<std::uint8_t> encode_container(const VideoClip& clip);
VideoClip decode_container(const std::vector<std::uint8_t>& bytes);
void write_container(const std::string& path, const VideoClip& clip);
VideoClip read_container(const std::string& path);

}  // namespace lipmel::data

#endif  // LIPMEL_DATA_CONTAINER_H_
