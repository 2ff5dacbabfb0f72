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

#ifndef HEPACK_HEMAT_LAYOUT_HPP_
#define HEPACK_HEMAT_LAYOUT_HPP_

#include <cstddef>
#include <string>
#include <string_view>

namespace hepack::hemat {

// RP: one ciphertext per row. CP: one per column. RCP / CCP: the row-major /
// column-major flattening spread over ceil(m n / s) ciphertexts.
enum class Layout { kRP, kCP, kRCP, kCCP };

std::string to_string(Layout layout);
// Accepts "rp", "cp", "rcp", "ccp" in any case; throws LayoutError.
Layout parse_layout(std::string_view name);

struct SlotPos {
  std::size_t ct = 0;
  std::size_t slot = 0;
  friend bool operator==(const SlotPos&, const SlotPos&) = default;
};

// Throws LayoutError when an RP row or CP column does not fit in s slots.
std::size_t ciphertext_count(Layout layout, std::size_t rows, std::size_t cols, std::size_t s);

// Where element (r, c) of a rows x cols matrix lives.
SlotPos locate(Layout layout, std::size_t rows, std::size_t cols, std::size_t s, std::size_t r,
               std::size_t c);

// The layout that stores M^T with the same slot content as `layout` stores M.
Layout transposed(Layout layout);

}  // namespace hepack::hemat

#endif  // HEPACK_HEMAT_LAYOUT_HPP_
