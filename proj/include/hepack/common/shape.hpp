/*
 * Copyright 2026 The hepack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HEPACK_COMMON_SHAPE_HPP_
#define HEPACK_COMMON_SHAPE_HPP_

#include <cstddef>
#include <string>

namespace hepack {

// Channel-major tensor shape (C, H, W).
struct Shape3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return channels * height * width; }
  // Flatten index c * H * W + y * W + x.
  std::size_t index(std::size_t c, std::size_t y, std::size_t x) const {
    return (c * height + y) * width + x;
  }
  std::string to_string() const {
    return std::to_string(channels) + "x" + std::to_string(height) + "x" + std::to_string(width);
  }
  friend bool operator==(const Shape3&, const Shape3&) = default;
};

}  // namespace hepack

#endif  // HEPACK_COMMON_SHAPE_HPP_
