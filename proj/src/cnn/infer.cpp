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

#include "hepack/cnn/infer.hpp"

#include <algorithm>
#include <mutex>
#include <optional>

#include "hepack/cnn/compile.hpp"
#include "hepack/cnn/plan.hpp"
#include "hepack/common/error.hpp"
#include "hepack/common/parallel.hpp"

namespace hepack::cnn {

namespace {

void check_depth(const slot::Backend& backend, std::size_t level, std::size_t cost) {
  const std::size_t budget = backend.params().depth_budget;
  if (level + cost > budget) {
    throw BudgetExhausted("network needs " + std::to_string(cost) + " levels but only " +
                          std::to_string(budget > level ? budget - level : 0) + " remain");
  }
}

void check_capacity(const slot::Backend& backend, const NetworkSpec& net, Packing packing, std::size_t s,
                    std::uint64_t cap) {
  if (cap == 0) return;
  const InferencePlan plan = plan_inference(net, packing, backend.params(), s, {.count_ops = false});
  if (plan.estimated_bytes() > cap) {
    throw CapacityRefusal(to_string(packing) + " inference needs an estimated " +
                          std::to_string(plan.estimated_bytes()) + " bytes, above the cap of " +
                          std::to_string(cap));
  }
}

}  // namespace

hemat::PackedVector pack_image(slot::Backend& backend, const Tensor3& image, std::size_t slots_used,
                               int scale_bits) {
  const std::size_t n = backend.slot_count();
  if (slots_used == 0 || slots_used > n) {
    throw DimensionError("slots_used must be in [1, " + std::to_string(n) + "]");
  }
  if (image.shape.size() == 0) throw DimensionError("cannot pack an empty image");
  if (image.values.size() != image.shape.size()) throw DimensionError("image values do not match its shape");
  hemat::PackedVector v;
  v.length = image.values.size();
  v.slots_used = slots_used;
  v.scale_bits = scale_bits;
  v.shape = image.shape;
  for (std::size_t j = 0; j < hemat::packed_count(v.length, slots_used); ++j) {
    slot::PlainVec p(n);
    for (std::size_t i = 0; i < slots_used && j * slots_used + i < v.length; ++i) {
      p[i] = image.values[j * slots_used + i];
    }
    v.cts.push_back(backend.encrypt(p));
  }
  return v;
}

std::vector<slot::Ciphertext> pack_image_interleaved(slot::Backend& backend, const Tensor3& image) {
  if (image.values.size() != image.shape.size()) throw DimensionError("image values do not match its shape");
  std::vector<slot::Ciphertext> out;
  out.reserve(image.values.size());
  for (std::int64_t v : image.values) out.push_back(backend.encrypt(slot::PlainVec(backend.slot_count(), v)));
  return out;
}

hemat::PackedVector layer_eval(slot::Backend& backend, const hemat::RowSource& rows, const hemat::PackedVector& x,
                               const InferOptions& options) {
  check_depth(backend, x.level(), 2);
  return hemat::matvec(backend, rows, x, {options.threads, options.skip_zero_segments});
}

hemat::PackedVector square_activation(slot::Backend& backend, hemat::PackedVector x) {
  check_depth(backend, x.level(), 1);
  for (auto& c : x.cts) c = backend.mult(c, c);
  x.scale_bits *= 2;
  return x;
}

hemat::PackedVector infer(slot::Backend& backend, const NetworkSpec& net, const hemat::PackedVector& image,
                          const InferOptions& options) {
  net.validate();
  if (image.length != net.input.size()) {
    throw DimensionError("image has " + std::to_string(image.length) + " values but the network expects " +
                         std::to_string(net.input.size()));
  }
  check_depth(backend, image.level(), net.depth_cost());
  check_capacity(backend, net, Packing::kCompact, image.slots_used, options.memory_cap_bytes);

  const std::vector<Shape3> shapes = net.shapes();
  const std::vector<int> scales = net.scale_ledger();
  const hemat::PackedVector* cur = &image;
  hemat::PackedVector owned;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    if (const auto rows = layer_rows(net.layers[i])) {
      hemat::PackedVector next = layer_eval(backend, *rows, *cur, options);
      owned = std::move(next);
    } else {
      if (cur == &image) owned = image;
      owned = square_activation(backend, std::move(owned));
    }
    owned.shape = shapes[i];
    owned.scale_bits = scales[i];
    cur = &owned;
  }
  return owned;
}

std::vector<slot::Ciphertext> interleaved_infer(slot::Backend& backend, const NetworkSpec& net,
                                                const std::vector<slot::Ciphertext>& pixels,
                                                const InferOptions& options) {
  net.validate();
  if (pixels.size() != net.input.size()) {
    throw DimensionError("got " + std::to_string(pixels.size()) + " pixel ciphertexts but the network expects " +
                         std::to_string(net.input.size()));
  }
  std::size_t level = 0;
  for (const auto& c : pixels) level = std::max(level, c.level());
  check_depth(backend, level, net.interleaved_depth_cost());
  check_capacity(backend, net, Packing::kInterleaved, 1, options.memory_cap_bytes);

  const std::size_t n = backend.slot_count();
  const std::vector<slot::Ciphertext>* cur = &pixels;
  std::vector<slot::Ciphertext> owned;
  for (const auto& layer : net.layers) {
    const auto rows = layer_rows(layer);
    if (!rows) {
      if (cur == &pixels) owned = pixels;
      for (auto& c : owned) c = backend.mult(c, c);
      cur = &owned;
      continue;
    }
    const std::size_t count = rows->row_count();
    std::vector<slot::Ciphertext> out(count);
    std::mutex out_lock;
    const auto live_before = static_cast<std::uint64_t>(std::max<std::int64_t>(0, backend.live_ciphertexts()));
    {
      slot::Backend::PeakModelGuard guard(backend);
      parallel_for(count, static_cast<unsigned>(options.threads), [&](std::size_t i) {
        const hemat::WeightRow row = rows->row(i);
        if (row.output_index >= count) throw DimensionError("row output index out of range");
        std::optional<slot::Ciphertext> acc;
        for (std::size_t k = 0; k < row.index.size(); ++k) {
          if (row.weight[k] == 0) continue;
          slot::Ciphertext prod = backend.cmult((*cur).at(row.index[k]), slot::PlainVec(n, row.weight[k]));
          acc = acc ? backend.add(*acc, prod) : prod;
        }
        if (!acc) {
          acc = backend.encrypt(slot::PlainVec(n, row.bias));
        } else if (row.bias != 0) {
          acc = backend.add_plain(*acc, slot::PlainVec(n, row.bias));
        }
        std::lock_guard lock(out_lock);
        if (!out[row.output_index].empty()) throw DimensionError("two rows write the same output");
        out[row.output_index] = std::move(*acc);
      });
      // Inputs, outputs and one row's accumulator, product and sum.
      backend.note_peak(live_before + count + 3);
    }
    owned = std::move(out);
    cur = &owned;
  }
  return owned;
}

std::vector<std::int64_t> decrypt_vector(slot::Backend& backend, const hemat::PackedVector& v) {
  std::vector<std::int64_t> out;
  out.reserve(v.length);
  for (const auto& c : v.cts) {
    const slot::PlainVec p = backend.decrypt(c);
    for (std::size_t i = 0; i < v.slots_used && out.size() < v.length; ++i) out.push_back(p[i]);
  }
  if (out.size() != v.length) throw DimensionError("packed vector holds too few ciphertexts");
  return out;
}

std::vector<std::int64_t> decrypt_interleaved(slot::Backend& backend, const std::vector<slot::Ciphertext>& v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(backend.decrypt(c)[0]);
  return out;
}

std::size_t argmax(const std::vector<std::int64_t>& values) {
  if (values.empty()) throw DimensionError("argmax of an empty vector");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace hepack::cnn
