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

#ifndef HEPACK_CNN_PLAN_HPP_
#define HEPACK_CNN_PLAN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hepack/cnn/network.hpp"
#include "hepack/slot/backend.hpp"
#include "hepack/slot/params.hpp"

namespace hepack::cnn {

enum class Packing { kCompact, kInterleaved };

std::string to_string(Packing p);
Packing parse_packing(std::string_view name);

struct LayerPlan {
  std::string kind;
  std::size_t input_cts = 0;
  std::size_t output_cts = 0;
  slot::CostReport ops;  // op and encrypt counts only
  std::uint64_t peak_live = 0;
};

// Analytic cost of one inference, assuming the caller keeps the encrypted
// input alive for the whole run. Op counts and peaks equal what infer and
// interleaved_infer report on any backend.
struct InferencePlan {
  Packing packing = Packing::kCompact;
  std::size_t slots_used = 0;
  std::size_t input_cts = 0;
  std::vector<LayerPlan> layers;
  slot::CostReport ops;  // totals, with peak and level fields filled
  std::size_t depth = 0;
  std::uint64_t ciphertext_bytes = 0;       // one ciphertext
  std::uint64_t peak_ciphertext_bytes = 0;  // peak live ciphertexts
  std::uint64_t key_bytes = 0;              // relinearization and rotation keys

  std::uint64_t estimated_bytes() const { return peak_ciphertext_bytes + key_bytes; }
};

struct PlanOptions {
  bool count_ops = true;  // false skips the per-row walk; only sizes and peaks
  bool skip_zero_segments = true;
};

InferencePlan plan_inference(const NetworkSpec& net, Packing packing, const slot::BackendParams& params,
                             std::size_t slots_used, const PlanOptions& options = {});

// Size of one key-switching key: one RNS digit per 60-bit prime, each a
// two-component element over q and one special prime.
std::uint64_t key_switch_key_bytes(std::size_t ring_dimension, std::size_t coeff_modulus_bits);

}  // namespace hepack::cnn

#endif  // HEPACK_CNN_PLAN_HPP_
