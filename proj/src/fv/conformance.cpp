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

#include "hepack/fv/conformance.hpp"

#include <algorithm>
#include <sstream>

#include "hepack/common/error.hpp"

namespace hepack::fv {

namespace {

std::vector<std::size_t> register_levels(const OpSequence& seq) {
  std::vector<std::size_t> level(seq.inputs.size(), 0);
  for (const Op& op : seq.ops) {
    if (op.lhs >= level.size() || ((op.kind == OpKind::kAdd || op.kind == OpKind::kMult) &&
                                      op.rhs >= level.size())) {
      throw DimensionError("op refers to a register that does not exist yet");
    }
    switch (op.kind) {
      case OpKind::kAdd:
        level.push_back(std::max(level[op.lhs], level[op.rhs]));
        break;
      case OpKind::kMult:
        level.push_back(std::max(level[op.lhs], level[op.rhs]) + 1);
        break;
      case OpKind::kCMult:
        level.push_back(level[op.lhs] + 1);
        break;
      default:
        level.push_back(level[op.lhs]);
    }
  }
  return level;
}

slot::Ciphertext apply(slot::Backend& be, const OpSequence& seq, const Op& op,
                       const std::vector<slot::Ciphertext>& regs) {
  switch (op.kind) {
    case OpKind::kAdd:
      return be.add(regs[op.lhs], regs[op.rhs]);
    case OpKind::kMult:
      return be.mult(regs[op.lhs], regs[op.rhs]);
    case OpKind::kCMult:
      return be.cmult(regs[op.lhs], seq.plains.at(op.plain));
    case OpKind::kRotate:
      return be.rotate(regs[op.lhs], op.param);
    case OpKind::kPartialSum:
      return be.partial_sum(regs[op.lhs], static_cast<std::size_t>(op.param));
    case OpKind::kAllSum:
      return be.all_sum(regs[op.lhs], static_cast<std::size_t>(op.param));
  }
  throw ParameterError("unknown op kind");
}

}  // namespace

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kAdd:
      return "add";
    case OpKind::kMult:
      return "mult";
    case OpKind::kCMult:
      return "cmult";
    case OpKind::kRotate:
      return "rotate";
    case OpKind::kPartialSum:
      return "partial_sum";
    case OpKind::kAllSum:
      return "all_sum";
  }
  return "?";
}

std::size_t OpSequence::depth() const {
  const auto level = register_levels(*this);
  return level.empty() ? 0 : *std::max_element(level.begin(), level.end());
}

std::string OpSequence::describe() const {
  std::ostringstream os;
  std::size_t reg = inputs.size();
  for (const Op& op : ops) {
    os << 'r' << reg++ << '=' << to_string(op.kind) << "(r" << op.lhs;
    if (op.kind == OpKind::kAdd || op.kind == OpKind::kMult) os << ",r" << op.rhs;
    if (op.kind == OpKind::kCMult) os << ",p" << op.plain;
    if (op.kind == OpKind::kRotate || op.kind == OpKind::kPartialSum || op.kind == OpKind::kAllSum) {
      os << ',' << op.param;
    }
    os << ") ";
  }
  return os.str();
}

OpSequence random_sequence(std::mt19937_64& rng, std::size_t slot_count,
                           std::uint64_t plain_modulus, const SequenceOptions& options) {
  if (options.inputs == 0 || options.min_ops > options.max_ops) {
    throw ParameterError("invalid sequence options");
  }
  const auto half = static_cast<std::int64_t>(plain_modulus / 2);
  std::uniform_int_distribution<std::int64_t> value(-half, half);
  auto random_vec = [&] {
    slot::PlainVec v(slot_count);
    for (auto& x : v.values()) x = value(rng);
    return v;
  };
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  OpSequence seq;
  for (std::size_t i = 0; i < options.inputs; ++i) seq.inputs.push_back(random_vec());
  std::vector<std::size_t> level(options.inputs, 0);
  const std::size_t count =
      std::uniform_int_distribution<std::size_t>(options.min_ops, options.max_ops)(rng);
  while (seq.ops.size() < count) {
    Op op;
    op.kind = static_cast<OpKind>(pick(6));
    op.lhs = pick(level.size());
    op.rhs = pick(level.size());
    std::size_t out_level = level[op.lhs];
    switch (op.kind) {
      case OpKind::kAdd:
        out_level = std::max(level[op.lhs], level[op.rhs]);
        break;
      case OpKind::kMult:
        out_level = std::max(level[op.lhs], level[op.rhs]) + 1;
        break;
      case OpKind::kCMult:
        out_level = level[op.lhs] + 1;
        break;
      case OpKind::kRotate:
        op.param = std::uniform_int_distribution<std::int64_t>(
            -static_cast<std::int64_t>(slot_count), static_cast<std::int64_t>(slot_count))(rng);
        break;
      case OpKind::kPartialSum:
      case OpKind::kAllSum:
        op.param = static_cast<std::int64_t>(1 + pick(slot_count));
        break;
    }
    if (out_level > options.max_depth) continue;
    if (op.kind == OpKind::kCMult) {
      // Masks, small weights and full-range plaintexts.
      slot::PlainVec w(slot_count);
      switch (pick(3)) {
        case 0:
          w = slot::PlainVec::one_hot(slot_count, pick(slot_count));
          break;
        case 1:
          for (auto& x : w.values()) x = std::uniform_int_distribution<std::int64_t>(-7, 7)(rng);
          break;
        default:
          w = random_vec();
      }
      op.plain = seq.plains.size();
      seq.plains.push_back(std::move(w));
    }
    level.push_back(out_level);
    seq.ops.push_back(op);
  }
  return seq;
}

ConformanceResult run_conformance(const OpSequence& seq, slot::Backend& reference,
                                  slot::Backend& candidate) {
  if (reference.slot_count() != candidate.slot_count() ||
      reference.plain_modulus() != candidate.plain_modulus()) {
    throw ParamMismatch("conformance backends disagree on slot count or plaintext modulus");
  }
  std::vector<slot::Ciphertext> ref, cand;
  for (const auto& v : seq.inputs) {
    ref.push_back(reference.encrypt(v));
    cand.push_back(candidate.encrypt(v));
  }
  for (const Op& op : seq.ops) {
    ref.push_back(apply(reference, seq, op, ref));
    cand.push_back(apply(candidate, seq, op, cand));
  }
  ConformanceResult result;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    slot::PlainVec expected = reference.decrypt(ref[r]);
    slot::PlainVec actual = candidate.decrypt(cand[r]);
    if (expected != actual) {
      result.match = false;
      result.first_register = r;
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] != actual[i]) {
          result.first_slot = i;
          break;
        }
      }
      result.expected = std::move(expected);
      result.actual = std::move(actual);
      return result;
    }
  }
  return result;
}

}  // namespace hepack::fv
