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

#ifndef HEPACK_HEMAT_GATHER_HPP_
#define HEPACK_HEMAT_GATHER_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "hepack/slot/backend.hpp"

namespace hepack::hemat {

struct SlotMove {
  std::size_t src_ct = 0;
  std::size_t src_slot = 0;
  std::size_t dst_ct = 0;
  std::size_t dst_slot = 0;
};

// Builds dst_count ciphertexts whose slot dst_slot of ciphertext dst_ct holds
// the value at (src_ct, src_slot); every other slot is zero. Moves sharing
// (src_ct, dst_ct, rotation) are served by one mask CMult, one rotation and
// one add, so the result is one CMult level above the deepest source used.
// Destinations receiving no move are fresh encryptions of zero.
std::vector<slot::Ciphertext> gather(slot::Backend& backend,
                                     std::span<const slot::Ciphertext> sources,
                                     std::span<const SlotMove> moves, std::size_t dst_count);

}  // namespace hepack::hemat

#endif  // HEPACK_HEMAT_GATHER_HPP_
