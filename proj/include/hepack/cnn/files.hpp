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

#ifndef HEPACK_CNN_FILES_HPP_
#define HEPACK_CNN_FILES_HPP_

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "hepack/cnn/plan.hpp"
#include "hepack/common/shape.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::cnn {

// Encrypted image file: magic "HPEI", version, parameter fingerprint,
// packing, shape, slots_used, scale exponent, ciphertext count, then the
// ciphertexts.
struct EncryptedImage {
  Packing packing = Packing::kCompact;
  Shape3 shape;
  std::size_t slots_used = 0;
  int scale_bits = 0;
  std::vector<slot::Ciphertext> cts;
};

void write_encrypted_image(const std::filesystem::path& path, const slot::Backend& backend,
                           const EncryptedImage& image);
EncryptedImage read_encrypted_image(const std::filesystem::path& path, slot::Backend& backend);

// Logits file: magic "HPLG", version, fingerprint, scale exponent, the slot
// map as (ciphertext, slot) pairs, then the ciphertexts.
struct EncryptedLogits {
  int scale_bits = 0;
  std::vector<std::pair<std::size_t, std::size_t>> slot_map;
  std::vector<slot::Ciphertext> cts;
};

void write_logits(const std::filesystem::path& path, const slot::Backend& backend, const EncryptedLogits& logits);
EncryptedLogits read_logits(const std::filesystem::path& path, slot::Backend& backend);
std::vector<std::int64_t> decrypt_logits(slot::Backend& backend, const EncryptedLogits& logits);

}  // namespace hepack::cnn

#endif  // HEPACK_CNN_FILES_HPP_
