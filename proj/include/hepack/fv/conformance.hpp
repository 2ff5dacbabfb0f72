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

#ifndef HEPACK_FV_CONFORMANCE_HPP_
#define HEPACK_FV_CONFORMANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hepack/slot/backend.hpp"

namespace hepack::fv {

enum class OpKind { kAdd, kMult, kCMult, kRotate, kPartialSum, kAllSum };

std::string to_string(OpKind kind);

// One step of a register program. Every op appends one register. `lhs` and
// `rhs` index registers, `plain` indexes OpSequence::plains, `param` is the
// rotation offset, block or region.
struct Op {
  OpKind kind = OpKind::kAdd;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::size_t plain = 0;
  std::int64_t param = 0;
};

// Registers 0..inputs.size()-1 hold the encrypted inputs.
struct OpSequence {
  std::vector<slot::PlainVec> inputs;
  std::vector<slot::PlainVec> plains;
  std::vector<Op> ops;

  std::size_t register_count() const { return inputs.size() + ops.size(); }
  // Multiplicative depth of the deepest register.
  std::size_t depth() const;
  std::string describe() const;
};

struct SequenceOptions {
  std::size_t inputs = 2;
  std::size_t min_ops = 3;
  std::size_t max_ops = 8;
  std::size_t max_depth = 4;
};

OpSequence random_sequence(std::mt19937_64& rng, std::size_t slot_count,
                           std::uint64_t plain_modulus, const SequenceOptions& options = {});

struct ConformanceResult {
  bool match = true;
  std::size_t first_register = 0;  // first mismatching register
  std::size_t first_slot = 0;
  slot::PlainVec expected, actual;
};

// Runs the program on both backends and compares the decryption of every
// register. Backend errors propagate.
ConformanceResult run_conformance(const OpSequence& seq, slot::Backend& reference,
                                  slot::Backend& candidate);

}  // namespace hepack::fv

#endif  // HEPACK_FV_CONFORMANCE_HPP_
