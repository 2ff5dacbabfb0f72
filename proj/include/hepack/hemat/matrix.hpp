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

#ifndef HEPACK_HEMAT_MATRIX_HPP_
#define HEPACK_HEMAT_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hepack/common/binary_io.hpp"
#include "hepack/hemat/layout.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::hemat {

struct PlainMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;  // row-major
  std::int64_t scale = 1;

  PlainMatrix() = default;
  PlainMatrix(std::size_t r, std::size_t c, std::int64_t fill = 0)
      : rows(r), cols(c), data(r * c, fill) {}
  PlainMatrix(std::size_t r, std::size_t c, std::vector<std::int64_t> values);

  std::int64_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  PlainMatrix transpose() const;
  friend bool operator==(const PlainMatrix&, const PlainMatrix&) = default;
};

struct EncMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Layout layout = Layout::kRCP;
  std::size_t slots_used = 0;
  std::int64_t scale = 1;
  std::vector<slot::Ciphertext> cts;

  std::size_t level() const;
};

// Throws DimensionError for empty matrices or s outside [1, slot_count].
EncMatrix pack_matrix(slot::Backend& backend, const PlainMatrix& m, Layout layout, std::size_t s);
// Entries are centered mod t.
PlainMatrix unpack_matrix(slot::Backend& backend, const EncMatrix& e);

// Same layout returns the input unchanged with no homomorphic operations;
// otherwise one gather (one CMult level).
EncMatrix convert_layout(slot::Backend& backend, const EncMatrix& e, Layout target);

// Entrywise sum; no level consumed. Throws LayoutError / DimensionError.
EncMatrix mat_add(slot::Backend& backend, const EncMatrix& a, const EncMatrix& b);

// Relabels the ciphertexts as the transposed matrix in the dual layout
// (RCP <-> CCP, RP <-> CP). No homomorphic operations.
EncMatrix mat_transpose(const EncMatrix& e);
// Transpose into a specific layout: relabel, then convert if needed.
EncMatrix mat_transpose(slot::Backend& backend, const EncMatrix& e, Layout target);

// C = A B with A in RCP (m x n) and B in CCP (n x p); C is RCP with A's s.
//
// Square d x d operands that fit one ciphertext (d^2 <= s, and either
// d^2 = slot_count or 2 d^2 <= slot_count) take the diagonal algorithm:
// exactly d Mult, d^2 CMult, d log2(d) + d^2 rotations for power-of-two d,
// and a depth of one Mult plus one CMult. Other shapes gather rows of A and
// rotated columns of B into blocks of width n (needs n <= s), multiply,
// fold and gather the dot products into place: one Mult and two CMult
// levels.
EncMatrix mat_mul(slot::Backend& backend, const EncMatrix& a, const EncMatrix& b);

// y = W x for an encrypted vector x (1 x L or L x 1, RCP or CCP) with
// L = W.cols. The result is an RCP column vector with x's s; two CMult
// levels.
EncMatrix plain_mat_mul(slot::Backend& backend, const PlainMatrix& w, const EncMatrix& x,
                        std::size_t threads = 1);

void serialize(const slot::Backend& backend, const EncMatrix& e, ByteWriter& out);
EncMatrix deserialize_matrix(slot::Backend& backend, ByteReader& in);

}  // namespace hepack::hemat

#endif  // HEPACK_HEMAT_MATRIX_HPP_
