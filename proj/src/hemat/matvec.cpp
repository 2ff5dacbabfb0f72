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

#include "hepack/hemat/matvec.hpp"

#include <algorithm>
#include <mutex>

#include "hepack/common/error.hpp"
#include "hepack/common/parallel.hpp"

namespace hepack::hemat {

std::size_t PackedVector::level() const {
  std::size_t l = 0;
  for (const auto& c : cts) l = std::max(l, c.level());
  return l;
}

std::vector<std::int64_t> WeightRow::dense(std::size_t length) const {
  std::vector<std::int64_t> out(length, 0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= length) throw DimensionError("weight index beyond row length");
    out[index[i]] = weight[i];
  }
  return out;
}

RowList::RowList(std::vector<WeightRow> rows, std::size_t input_length)
    : rows_(std::move(rows)), input_length_(input_length) {}

namespace {

void check_row(const WeightRow& row, std::size_t length, std::size_t rows) {
  if (row.index.size() != row.weight.size()) throw DimensionError("weight row index/value mismatch");
  for (std::size_t i = 0; i < row.index.size(); ++i) {
    if (row.index[i] >= length) throw DimensionError("weight index beyond input length");
    if (i > 0 && row.index[i] <= row.index[i - 1]) {
      throw DimensionError("weight row indices must be strictly increasing");
    }
  }
  if (row.output_index >= rows) throw DimensionError("row output index out of range");
}

}  // namespace

PackedVector matvec(slot::Backend& backend, const RowSource& rows, const PackedVector& x,
                    const MatvecOptions& options) {
  const std::size_t n = backend.slot_count();
  const std::size_t s = x.slots_used;
  if (s == 0 || s > n) throw DimensionError("slots_used must be in [1, slot_count]");
  if (rows.input_length() != x.length) {
    throw DimensionError("weight rows have length " + std::to_string(rows.input_length()) +
                         " but the input vector has " + std::to_string(x.length));
  }
  if (x.cts.size() != packed_count(x.length, s)) {
    throw DimensionError("packed vector has the wrong number of ciphertexts");
  }
  const std::size_t out_len = rows.row_count();
  if (out_len == 0) throw DimensionError("weight matrix has no rows");
  const std::size_t out_k = packed_count(out_len, s);

  std::vector<std::optional<slot::Ciphertext>> acc(out_k);
  std::vector<std::mutex> locks(out_k);
  std::vector<slot::PlainVec> plain_bias(out_k, slot::PlainVec(n));
  std::vector<bool> has_plain_bias(out_k, false);
  std::mutex bias_lock;
  const slot::PlainVec slot0 = slot::PlainVec::one_hot(n, 0);

  const auto live_before = static_cast<std::uint64_t>(std::max<std::int64_t>(0, backend.live_ciphertexts()));
  {
    slot::Backend::PeakModelGuard guard(backend);
    parallel_for(out_len, options.threads, [&](std::size_t i) {
      const WeightRow row = rows.row(i);
      check_row(row, x.length, out_len);
      const std::size_t dst_ct = row.output_index / s;
      const std::size_t dst_slot = row.output_index % s;

      std::optional<slot::Ciphertext> sum;
      std::size_t pos = 0;
      for (std::size_t seg = 0; seg < x.cts.size(); ++seg) {
        const std::size_t end = (seg + 1) * s;
        slot::PlainVec w(n);
        bool any = false;
        for (; pos < row.index.size() && row.index[pos] < end; ++pos) {
          if (row.weight[pos] == 0) continue;
          w[row.index[pos] - seg * s] = row.weight[pos];
          any = true;
        }
        if (!any && options.skip_zero_segments) continue;
        slot::Ciphertext prod = backend.cmult(x.cts[seg], w);
        sum = sum ? backend.add(*sum, prod) : prod;
      }
      if (!sum) {
        std::lock_guard lock(bias_lock);
        plain_bias[dst_ct][dst_slot] += row.bias;
        has_plain_bias[dst_ct] = has_plain_bias[dst_ct] || row.bias != 0;
        return;
      }
      slot::Ciphertext folded = backend.all_sum(*sum, s);
      if (row.bias != 0) {
        slot::PlainVec b(n);
        b[0] = row.bias;
        folded = backend.add_plain(folded, b);
      }
      slot::Ciphertext placed = backend.cmult(folded, slot0);
      if (dst_slot != 0) placed = backend.rotate(placed, -static_cast<std::int64_t>(dst_slot));
      std::lock_guard lock(locks[dst_ct]);
      acc[dst_ct] = acc[dst_ct] ? backend.add(*acc[dst_ct], placed) : placed;
    });
    // Inputs, the outputs under construction and one row's working set.
    backend.note_peak(live_before + out_k + 3);
  }

  PackedVector y;
  y.length = out_len;
  y.slots_used = s;
  y.scale_bits = x.scale_bits;
  for (std::size_t j = 0; j < out_k; ++j) {
    if (acc[j]) {
      if (has_plain_bias[j]) acc[j] = backend.add_plain(*acc[j], plain_bias[j]);
      y.cts.push_back(std::move(*acc[j]));
    } else {
      y.cts.push_back(backend.encrypt(plain_bias[j]));
    }
  }
  return y;
}

}  // namespace hepack::hemat
