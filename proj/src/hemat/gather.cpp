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

#include "hepack/hemat/gather.hpp"

#include <map>
#include <optional>
#include <tuple>

#include "hepack/common/error.hpp"

namespace hepack::hemat {

std::vector<slot::Ciphertext> gather(slot::Backend& backend,
                                     std::span<const slot::Ciphertext> sources,
                                     std::span<const SlotMove> moves, std::size_t dst_count) {
  const std::size_t n = backend.slot_count();
  // (src_ct, dst_ct, rotation) -> mask over source slots.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, slot::PlainVec> groups;
  for (const SlotMove& m : moves) {
    if (m.src_ct >= sources.size() || m.dst_ct >= dst_count || m.src_slot >= n ||
        m.dst_slot >= n) {
      throw DimensionError("gather: move out of range");
    }
    const std::size_t rotation = (m.src_slot + n - m.dst_slot) % n;
    auto [it, inserted] = groups.try_emplace({m.src_ct, m.dst_ct, rotation}, n);
    if (it->second[m.src_slot] != 0) throw DimensionError("gather: duplicate move");
    it->second[m.src_slot] = 1;
  }
  std::vector<std::optional<slot::Ciphertext>> acc(dst_count);
  for (const auto& [key, mask] : groups) {
    const auto [src, dst, rotation] = key;
    slot::Ciphertext piece = backend.cmult(sources[src], mask);
    if (rotation != 0) piece = backend.rotate(piece, static_cast<std::int64_t>(rotation));
    acc[dst] = acc[dst] ? backend.add(*acc[dst], piece) : piece;
  }
  std::vector<slot::Ciphertext> out;
  out.reserve(dst_count);
  for (auto& a : acc) out.push_back(a ? std::move(*a) : backend.encrypt(slot::PlainVec(n)));
  return out;
}

}  // namespace hepack::hemat
