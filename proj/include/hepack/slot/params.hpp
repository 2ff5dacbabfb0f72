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

#ifndef HEPACK_SLOT_PARAMS_HPP_
#define HEPACK_SLOT_PARAMS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace hepack::slot {

// Parameters shared by every slot backend. ring_dimension and
// coeff_modulus_bits size the ciphertexts for the memory model; the slot
// arithmetic itself only depends on plain_modulus and slot_count.
struct BackendParams {
  std::string name;
  std::size_t ring_dimension = 0;
  std::size_t coeff_modulus_bits = 0;
  std::uint64_t plain_modulus = 0;
  std::size_t slot_count = 0;
  std::size_t depth_budget = 0;
  std::size_t security_claim_bits = 0;  // recorded, never checked
  // Modulus size assumed for the per-pixel baseline, which needs fewer
  // levels. Zero means coeff_modulus_bits. Not part of the fingerprint.
  std::size_t interleaved_coeff_modulus_bits = 0;

  // Throws ParameterError unless ring_dimension is a power of two,
  // slot_count <= ring_dimension and plain_modulus is odd and >= 3.
  void validate() const;

  // Hash of the fields that determine ciphertext compatibility.
  std::uint64_t fingerprint() const;

  // Size of one two-component ciphertext in bytes.
  std::uint64_t ciphertext_bytes() const {
    return 2 * static_cast<std::uint64_t>(ring_dimension) * coeff_modulus_bits / 8;
  }

  std::uint64_t interleaved_ciphertext_bytes() const {
    const std::size_t bits =
        interleaved_coeff_modulus_bits == 0 ? coeff_modulus_bits : interleaved_coeff_modulus_bits;
    return 2 * static_cast<std::uint64_t>(ring_dimension) * bits / 8;
  }

  BackendParams with_depth_budget(std::size_t budget) const {
    BackendParams copy = *this;
    copy.depth_budget = budget;
    return copy;
  }
};

bool operator==(const BackendParams& a, const BackendParams& b);

// Built-in profiles: mnist, retina, desk.
const std::map<std::string, BackendParams>& builtin_profiles();

// Looks up a built-in profile; throws ParameterError for unknown names.
BackendParams profile(std::string_view name);

// Reads a JSON object keyed by profile name. Each entry may override any
// field; missing fields fall back to the built-in profile of the same name.
std::map<std::string, BackendParams> load_profiles(const std::filesystem::path& path);

}  // namespace hepack::slot

#endif  // HEPACK_SLOT_PARAMS_HPP_
