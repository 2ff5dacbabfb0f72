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

#ifndef HEPACK_HEMAT_MATVEC_HPP_
#define HEPACK_HEMAT_MATVEC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hepack/common/shape.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::hemat {

// A compactly packed vector: logical index p lives in ciphertext p / s,
// slot p mod s. Slots at or beyond s, and beyond the logical length, are
// zero.
struct PackedVector {
  std::size_t length = 0;
  std::size_t slots_used = 0;
  int scale_bits = 0;  // values carry a factor 2^scale_bits
  std::optional<Shape3> shape;
  std::vector<slot::Ciphertext> cts;

  std::size_t level() const;
};

inline std::size_t packed_count(std::size_t length, std::size_t s) { return (length + s - 1) / s; }

// One row of a weight matrix, stored sparsely: input positions in
// increasing order with their weights. Positions absent from `index` have
// weight zero.
struct WeightRow {
  std::vector<std::uint32_t> index;
  std::vector<std::int64_t> weight;
  std::int64_t bias = 0;
  std::size_t output_index = 0;

  // Dense form of length `length`.
  std::vector<std::int64_t> dense(std::size_t length) const;
};

// Rows of a weight matrix, produced on demand. Implementations must be
// safe to call concurrently.
class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual std::size_t row_count() const = 0;
  virtual std::size_t input_length() const = 0;
  virtual WeightRow row(std::size_t i) const = 0;
};

class RowList final : public RowSource {
 public:
  RowList(std::vector<WeightRow> rows, std::size_t input_length);
  std::size_t row_count() const override { return rows_.size(); }
  std::size_t input_length() const override { return input_length_; }
  WeightRow row(std::size_t i) const override { return rows_.at(i); }

 private:
  std::vector<WeightRow> rows_;
  std::size_t input_length_;
};

struct MatvecOptions {
  std::size_t threads = 1;
  bool skip_zero_segments = true;
};

// Encrypted y = W x. Per row: CMult each segment of x by the matching
// weight segment (all-zero segments are skipped unless disabled), add the
// products, all_sum over s, add the bias at slot 0, mask slot 0 and rotate
// it to the row's output slot, then accumulate. Rows whose weights are all
// zero contribute their bias as a plaintext. Output length is row_count and
// every output_index must be below it; output level is input level + 2.
// Counter totals and decrypted results do not depend on `threads`.
PackedVector matvec(slot::Backend& backend, const RowSource& rows, const PackedVector& x,
                    const MatvecOptions& options = {});

}  // namespace hepack::hemat

#endif  // HEPACK_HEMAT_MATVEC_HPP_
