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

#ifndef HEPACK_COMMON_TENSOR_HPP_
#define HEPACK_COMMON_TENSOR_HPP_

#include <cstdint>
#include <vector>

#include "hepack/common/shape.hpp"

namespace hepack {

// Integer tensor in channel-major, then row-major order.
struct Tensor3 {
  Shape3 shape;
  std::vector<std::int64_t> values;

  Tensor3() = default;
  explicit Tensor3(Shape3 s, std::int64_t fill = 0) : shape(s), values(s.size(), fill) {}

  std::int64_t& at(std::size_t c, std::size_t y, std::size_t x) { return values[shape.index(c, y, x)]; }
  std::int64_t at(std::size_t c, std::size_t y, std::size_t x) const {
    return values[shape.index(c, y, x)];
  }
  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

}  // namespace hepack

#endif  // HEPACK_COMMON_TENSOR_HPP_
