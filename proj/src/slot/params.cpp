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

#include "hepack/slot/params.hpp"

#include <bit>

#include <nlohmann/json.hpp>

#include "hepack/common/binary_io.hpp"
#include "hepack/common/error.hpp"

namespace hepack::slot {

void BackendParams::validate() const {
  if (ring_dimension < 2 || !std::has_single_bit(ring_dimension)) {
    throw ParameterError("ring_dimension must be a power of two");
  }
  if (slot_count == 0 || slot_count > ring_dimension) {
    throw ParameterError("slot_count must be in [1, ring_dimension]");
  }
  if (plain_modulus < 3 || plain_modulus % 2 == 0) {
    throw ParameterError("plain_modulus must be odd and >= 3");
  }
  if (plain_modulus >= (std::uint64_t{1} << 62)) {
    throw ParameterError("plain_modulus must be below 2^62");
  }
  if (coeff_modulus_bits == 0) throw ParameterError("coeff_modulus_bits must be positive");
}

std::uint64_t BackendParams::fingerprint() const {
  const std::string canonical = "ring=" + std::to_string(ring_dimension) +
                                ";qbits=" + std::to_string(coeff_modulus_bits) +
                                ";t=" + std::to_string(plain_modulus) +
                                ";slots=" + std::to_string(slot_count);
  return fnv1a64(canonical);
}

bool operator==(const BackendParams& a, const BackendParams& b) {
  return a.name == b.name && a.ring_dimension == b.ring_dimension &&
         a.coeff_modulus_bits == b.coeff_modulus_bits && a.plain_modulus == b.plain_modulus &&
         a.slot_count == b.slot_count && a.depth_budget == b.depth_budget &&
         a.security_claim_bits == b.security_claim_bits &&
         a.interleaved_coeff_modulus_bits == b.interleaved_coeff_modulus_bits;
}

const std::map<std::string, BackendParams>& builtin_profiles() {
  static const std::map<std::string, BackendParams> profiles = {
      {"mnist", {"mnist", 1u << 14, 540, 4398047232001ULL, 1u << 13, 8, 80, 400}},
      {"retina", {"retina", 1u << 14, 660, 4503599627763713ULL, 1u << 13, 10, 80, 450}},
      // 1032193 = 126 * 8192 + 1 is prime, so batching works at ring 2^12.
      {"desk", {"desk", 1u << 12, 120, 1032193ULL, 1u << 11, 8, 0}},
  };
  return profiles;
}

BackendParams profile(std::string_view name) {
  const auto& all = builtin_profiles();
  auto it = all.find(std::string(name));
  if (it == all.end()) throw ParameterError("unknown profile '" + std::string(name) + "'");
  return it->second;
}

std::map<std::string, BackendParams> load_profiles(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("profile file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError("profile file must hold a JSON object");
  std::map<std::string, BackendParams> out;
  for (const auto& [name, entry] : doc.items()) {
    BackendParams p;
    if (auto it = builtin_profiles().find(name); it != builtin_profiles().end()) p = it->second;
    p.name = name;
    try {
      if (entry.contains("ring_dimension")) p.ring_dimension = entry.at("ring_dimension").get<std::size_t>();
      if (entry.contains("coeff_modulus_bits")) p.coeff_modulus_bits = entry.at("coeff_modulus_bits").get<std::size_t>();
      if (entry.contains("plain_modulus")) p.plain_modulus = entry.at("plain_modulus").get<std::uint64_t>();
      if (entry.contains("slot_count")) p.slot_count = entry.at("slot_count").get<std::size_t>();
      if (entry.contains("depth_budget")) p.depth_budget = entry.at("depth_budget").get<std::size_t>();
      if (entry.contains("security_claim_bits")) p.security_claim_bits = entry.at("security_claim_bits").get<std::size_t>();
      if (entry.contains("interleaved_coeff_modulus_bits")) {
        p.interleaved_coeff_modulus_bits = entry.at("interleaved_coeff_modulus_bits").get<std::size_t>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("profile '" + name + "': " + e.what());
    }
    if (!entry.contains("slot_count") && entry.contains("ring_dimension")) {
      p.slot_count = p.ring_dimension / 2;
    }
    p.validate();
    out.emplace(name, p);
  }
  return out;
}

}  // namespace hepack::slot
