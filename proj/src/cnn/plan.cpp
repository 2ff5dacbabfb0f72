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

#include "hepack/cnn/plan.hpp"

#include <algorithm>
#include <bit>

#include "hepack/cnn/compile.hpp"
#include "hepack/common/error.hpp"
#include "hepack/hemat/matvec.hpp"

namespace hepack::cnn {

std::string to_string(Packing p) { return p == Packing::kCompact ? "compact" : "interleaved"; }

Packing parse_packing(std::string_view name) {
  if (name == "compact") return Packing::kCompact;
  if (name == "interleaved") return Packing::kInterleaved;
  throw ParameterError("unknown packing '" + std::string(name) + "' (expected compact or interleaved)");
}

std::uint64_t key_switch_key_bytes(std::size_t ring_dimension, std::size_t coeff_modulus_bits) {
  const std::uint64_t digits = (coeff_modulus_bits + 59) / 60;
  return digits * 2 * ring_dimension * (coeff_modulus_bits + 61) / 8;
}

namespace {

void accumulate(slot::CostReport& total, const slot::CostReport& part) {
  total.mult_count += part.mult_count;
  total.cmult_count += part.cmult_count;
  total.add_count += part.add_count;
  total.rotation_count += part.rotation_count;
  total.encrypt_count += part.encrypt_count;
}

// Mirrors hemat::matvec.
slot::CostReport compact_linear_ops(const hemat::RowSource& rows, std::size_t in_len, std::size_t s,
                                    bool skip) {
  slot::CostReport ops;
  const std::size_t in_k = hemat::packed_count(in_len, s);
  const std::size_t out_k = hemat::packed_count(rows.row_count(), s);
  const auto fold = static_cast<std::uint64_t>(std::bit_width(s - 1));
  std::vector<std::uint64_t> summed_rows(out_k, 0);
  std::vector<bool> plain_bias(out_k, false);
  for (std::size_t i = 0; i < rows.row_count(); ++i) {
    const hemat::WeightRow row = rows.row(i);
    const std::size_t dst = row.output_index / s;
    std::size_t segments = in_k;
    if (skip) {
      const auto flags = zero_segments(row, in_len, s);
      segments = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), false));
    }
    if (segments == 0) {
      plain_bias[dst] = plain_bias[dst] || row.bias != 0;
      continue;
    }
    ops.cmult_count += segments + 1;
    ops.add_count += segments - 1 + fold + (row.bias != 0 ? 1 : 0);
    ops.rotation_count += fold + (row.output_index % s != 0 ? 1 : 0);
    ++summed_rows[dst];
  }
  for (std::size_t j = 0; j < out_k; ++j) {
    if (summed_rows[j] == 0) {
      ++ops.encrypt_count;
    } else {
      ops.add_count += summed_rows[j] - 1 + (plain_bias[j] ? 1 : 0);
    }
  }
  return ops;
}

// Mirrors the per-pixel layer in interleaved_infer.
slot::CostReport interleaved_linear_ops(const hemat::RowSource& rows) {
  slot::CostReport ops;
  for (std::size_t i = 0; i < rows.row_count(); ++i) {
    const hemat::WeightRow row = rows.row(i);
    const auto terms = static_cast<std::uint64_t>(
        std::count_if(row.weight.begin(), row.weight.end(), [](std::int64_t w) { return w != 0; }));
    if (terms == 0) {
      ++ops.encrypt_count;
      continue;
    }
    ops.cmult_count += terms;
    ops.add_count += terms - 1 + (row.bias != 0 ? 1 : 0);
  }
  return ops;
}

}  // namespace

InferencePlan plan_inference(const NetworkSpec& net, Packing packing, const slot::BackendParams& params,
                             std::size_t slots_used, const PlanOptions& options) {
  net.validate();
  const bool compact = packing == Packing::kCompact;
  if (compact && (slots_used == 0 || slots_used > params.slot_count)) {
    throw DimensionError("slots_used must be in [1, " + std::to_string(params.slot_count) + "]");
  }
  const std::size_t s = compact ? slots_used : 1;
  const std::vector<std::size_t> lengths = net.lengths();

  InferencePlan plan;
  plan.packing = packing;
  plan.slots_used = compact ? slots_used : 0;
  plan.input_cts = hemat::packed_count(lengths[0], s);
  plan.depth = compact ? net.depth_cost() : net.interleaved_depth_cost();
  plan.ciphertext_bytes = compact ? params.ciphertext_bytes() : params.interleaved_ciphertext_bytes();
  const std::size_t key_bits =
      compact || params.interleaved_coeff_modulus_bits == 0 ? params.coeff_modulus_bits
                                                            : params.interleaved_coeff_modulus_bits;
  const std::uint64_t rotation_keys = compact ? static_cast<std::uint64_t>(std::bit_width(params.slot_count - 1)) : 0;
  plan.key_bytes = (1 + rotation_keys) * key_switch_key_bytes(params.ring_dimension, key_bits);

  std::uint64_t peak = plan.input_cts;
  for (std::size_t j = 0; j < net.layers.size(); ++j) {
    LayerPlan lp;
    lp.kind = layer_kind(net.layers[j]);
    lp.input_cts = hemat::packed_count(lengths[j], s);
    lp.output_cts = hemat::packed_count(lengths[j + 1], s);
    const std::uint64_t live_before = plan.input_cts + (j > 0 ? lp.input_cts : 0);
    if (is_linear(net.layers[j])) {
      lp.peak_live = live_before + lp.output_cts + 3;
      if (options.count_ops) {
        const auto rows = layer_rows(net.layers[j]);
        lp.ops = compact ? compact_linear_ops(*rows, lengths[j], s, options.skip_zero_segments)
                         : interleaved_linear_ops(*rows);
      }
    } else {
      // Squares replace ciphertexts in place unless they still belong to
      // the caller's input.
      lp.peak_live = live_before + (j == 0 ? lp.input_cts : 1);
      lp.ops.mult_count = lp.input_cts;
    }
    peak = std::max(peak, lp.peak_live);
    accumulate(plan.ops, lp.ops);
    plan.layers.push_back(std::move(lp));
  }
  plan.ops.encrypt_count += plan.input_cts;
  plan.ops.peak_live_ciphertexts = peak;
  plan.ops.max_level_used = plan.depth;
  plan.ops.estimated_ciphertext_bytes = peak * plan.ciphertext_bytes;
  plan.peak_ciphertext_bytes = peak * plan.ciphertext_bytes;
  return plan;
}

}  // namespace hepack::cnn
