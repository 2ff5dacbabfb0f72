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

#include "hepack/hemat/matrix.hpp"

#include <algorithm>
#include <optional>

#include "hepack/common/error.hpp"
#include "hepack/hemat/gather.hpp"
#include "hepack/hemat/matvec.hpp"

namespace hepack::hemat {

namespace {

constexpr std::string_view kMatrixMagic = "HPEM";
constexpr std::uint32_t kMatrixVersion = 1;

void check_slots(const slot::Backend& backend, std::size_t s) {
  if (s == 0 || s > backend.slot_count()) {
    throw DimensionError("slots_used " + std::to_string(s) + " outside [1, " +
                         std::to_string(backend.slot_count()) + "]");
  }
}

void check_shape(const EncMatrix& e) {
  if (e.cts.size() != ciphertext_count(e.layout, e.rows, e.cols, e.slots_used)) {
    throw LayoutError("encrypted matrix has the wrong number of ciphertexts for its layout");
  }
}

EncMatrix mat_mul_diagonal(slot::Backend& backend, const EncMatrix& a, const EncMatrix& b) {
  const std::size_t d = a.rows;
  const std::size_t n = backend.slot_count();
  const auto dd = static_cast<std::int64_t>(d);
  slot::Ciphertext b_rot = b.cts[0];
  // Copy B into slots [d^2, 2 d^2) so that rotating by i d reads B cyclically.
  if (d * d != n) b_rot = backend.add(b_rot, backend.rotate(b_rot, -dd * dd));

  std::optional<slot::Ciphertext> c;
  for (std::size_t i = 0; i < d; ++i) {
    // Slot r d of the folded product holds sum_k A[r][k] B[k][(r + i) mod d].
    const slot::Ciphertext folded = backend.partial_sum(backend.mult(a.cts[0], b_rot), d);
    for (std::size_t r = 0; r < d; ++r) {
      slot::Ciphertext piece = backend.cmult(folded, slot::PlainVec::one_hot(n, r * d));
      const std::size_t shift = (r + i) % d;
      if (shift != 0) piece = backend.rotate(piece, -static_cast<std::int64_t>(shift));
      c = c ? backend.add(*c, piece) : piece;
    }
    if (i + 1 < d) b_rot = backend.rotate(b_rot, dd);
  }
  EncMatrix out{d, d, Layout::kRCP, a.slots_used, a.scale * b.scale, {*c}};
  return out;
}

EncMatrix mat_mul_blocked(slot::Backend& backend, const EncMatrix& a, const EncMatrix& b) {
  const std::size_t m = a.rows, n = a.cols, p = b.cols, s = a.slots_used;
  if (n > s) throw LayoutError("inner dimension exceeds slots_used");
  const std::size_t per_ct = s / n;
  const std::size_t blocks = (m + per_ct - 1) / per_ct;
  auto block_pos = [&](std::size_t r, std::size_t k) {
    return SlotPos{r / per_ct, (r % per_ct) * n + k};
  };

  // Rows of A in blocks of width n; the RCP layout already has this form
  // when n divides s.
  std::vector<slot::Ciphertext> a_blocks;
  if (s % n == 0) {
    a_blocks = a.cts;
  } else {
    std::vector<SlotMove> moves;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        const SlotPos src = locate(Layout::kRCP, m, n, s, r, k);
        const SlotPos dst = block_pos(r, k);
        moves.push_back({src.ct, src.slot, dst.ct, dst.slot});
      }
    }
    a_blocks = gather(backend, a.cts, moves, blocks);
  }

  std::vector<slot::Ciphertext> sums;
  std::vector<SlotMove> extract;
  for (std::size_t i = 0; i < p; ++i) {
    // Block r holds column (r + i) mod p of B.
    std::vector<SlotMove> moves;
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t j = (r + i) % p;
      for (std::size_t k = 0; k < n; ++k) {
        const SlotPos src = locate(Layout::kCCP, n, p, s, k, j);
        const SlotPos dst = block_pos(r, k);
        moves.push_back({src.ct, src.slot, dst.ct, dst.slot});
      }
    }
    const auto b_blocks = gather(backend, b.cts, moves, blocks);
    for (std::size_t q = 0; q < blocks; ++q) {
      sums.push_back(backend.partial_sum(backend.mult(a_blocks[q], b_blocks[q]), n));
    }
    for (std::size_t r = 0; r < m; ++r) {
      const SlotPos src = block_pos(r, 0);
      const SlotPos dst = locate(Layout::kRCP, m, p, s, r, (r + i) % p);
      extract.push_back({i * blocks + src.ct, src.slot, dst.ct, dst.slot});
    }
  }
  EncMatrix out{m, p, Layout::kRCP, s, a.scale * b.scale, {}};
  out.cts = gather(backend, sums, extract, ciphertext_count(Layout::kRCP, m, p, s));
  return out;
}

}  // namespace

PlainMatrix::PlainMatrix(std::size_t r, std::size_t c, std::vector<std::int64_t> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != r * c) throw DimensionError("matrix data size does not match its shape");
}

PlainMatrix PlainMatrix::transpose() const {
  PlainMatrix t(cols, rows);
  t.scale = scale;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

std::size_t EncMatrix::level() const {
  std::size_t l = 0;
  for (const auto& c : cts) l = std::max(l, c.level());
  return l;
}

EncMatrix pack_matrix(slot::Backend& backend, const PlainMatrix& m, Layout layout, std::size_t s) {
  check_slots(backend, s);
  if (m.data.size() != m.rows * m.cols) throw DimensionError("matrix data size does not match its shape");
  const std::size_t k = ciphertext_count(layout, m.rows, m.cols, s);
  std::vector<slot::PlainVec> plain(k, slot::PlainVec(backend.slot_count()));
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      const SlotPos pos = locate(layout, m.rows, m.cols, s, r, c);
      plain[pos.ct][pos.slot] = m.at(r, c);
    }
  }
  EncMatrix e{m.rows, m.cols, layout, s, m.scale, {}};
  for (const auto& v : plain) e.cts.push_back(backend.encrypt(v));
  return e;
}

PlainMatrix unpack_matrix(slot::Backend& backend, const EncMatrix& e) {
  check_shape(e);
  std::vector<slot::PlainVec> plain;
  for (const auto& c : e.cts) plain.push_back(backend.decrypt(c));
  PlainMatrix m(e.rows, e.cols);
  m.scale = e.scale;
  for (std::size_t r = 0; r < e.rows; ++r) {
    for (std::size_t c = 0; c < e.cols; ++c) {
      const SlotPos pos = locate(e.layout, e.rows, e.cols, e.slots_used, r, c);
      m.at(r, c) = plain[pos.ct][pos.slot];
    }
  }
  return m;
}

EncMatrix convert_layout(slot::Backend& backend, const EncMatrix& e, Layout target) {
  check_shape(e);
  if (e.layout == target) return e;
  const std::size_t k = ciphertext_count(target, e.rows, e.cols, e.slots_used);
  std::vector<SlotMove> moves;
  moves.reserve(e.rows * e.cols);
  for (std::size_t r = 0; r < e.rows; ++r) {
    for (std::size_t c = 0; c < e.cols; ++c) {
      const SlotPos src = locate(e.layout, e.rows, e.cols, e.slots_used, r, c);
      const SlotPos dst = locate(target, e.rows, e.cols, e.slots_used, r, c);
      moves.push_back({src.ct, src.slot, dst.ct, dst.slot});
    }
  }
  EncMatrix out{e.rows, e.cols, target, e.slots_used, e.scale, {}};
  out.cts = gather(backend, e.cts, moves, k);
  return out;
}

EncMatrix mat_add(slot::Backend& backend, const EncMatrix& a, const EncMatrix& b) {
  check_shape(a);
  check_shape(b);
  if (a.rows != b.rows || a.cols != b.cols) throw DimensionError("mat_add: dimensions differ");
  if (a.layout != b.layout || a.slots_used != b.slots_used) {
    throw LayoutError("mat_add: operands use different layouts");
  }
  if (a.scale != b.scale) throw DimensionError("mat_add: operands carry different scales");
  EncMatrix out{a.rows, a.cols, a.layout, a.slots_used, a.scale, {}};
  for (std::size_t i = 0; i < a.cts.size(); ++i) out.cts.push_back(backend.add(a.cts[i], b.cts[i]));
  return out;
}

EncMatrix mat_transpose(const EncMatrix& e) {
  EncMatrix out = e;
  out.rows = e.cols;
  out.cols = e.rows;
  out.layout = transposed(e.layout);
  return out;
}

EncMatrix mat_transpose(slot::Backend& backend, const EncMatrix& e, Layout target) {
  return convert_layout(backend, mat_transpose(e), target);
}

EncMatrix mat_mul(slot::Backend& backend, const EncMatrix& a, const EncMatrix& b) {
  check_shape(a);
  check_shape(b);
  if (a.layout != Layout::kRCP || b.layout != Layout::kCCP) {
    throw LayoutError("mat_mul expects A in RCP and B in CCP");
  }
  if (a.cols != b.rows) throw DimensionError("mat_mul: inner dimensions differ");
  if (a.slots_used != b.slots_used) throw LayoutError("mat_mul: operands use different slots_used");
  const std::size_t d = a.rows;
  const std::size_t n = backend.slot_count();
  const bool square = a.rows == a.cols && b.rows == b.cols;
  if (square && d * d <= a.slots_used && (d * d == n || 2 * d * d <= n)) {
    return mat_mul_diagonal(backend, a, b);
  }
  return mat_mul_blocked(backend, a, b);
}

EncMatrix plain_mat_mul(slot::Backend& backend, const PlainMatrix& w, const EncMatrix& x,
                        std::size_t threads) {
  check_shape(x);
  if (x.rows != 1 && x.cols != 1) throw LayoutError("plain_mat_mul expects a vector operand");
  if (x.layout != Layout::kRCP && x.layout != Layout::kCCP) {
    throw LayoutError("plain_mat_mul expects a compactly packed vector (RCP or CCP)");
  }
  const std::size_t length = x.rows * x.cols;
  if (w.cols != length) throw DimensionError("plain_mat_mul: W has the wrong number of columns");
  std::vector<WeightRow> rows(w.rows);
  for (std::size_t r = 0; r < w.rows; ++r) {
    rows[r].output_index = r;
    for (std::size_t c = 0; c < w.cols; ++c) {
      if (w.at(r, c) == 0) continue;
      rows[r].index.push_back(static_cast<std::uint32_t>(c));
      rows[r].weight.push_back(w.at(r, c));
    }
  }
  PackedVector v{length, x.slots_used, 0, std::nullopt, x.cts};
  PackedVector y = matvec(backend, RowList(std::move(rows), length), v, {threads, true});
  return EncMatrix{w.rows, 1, Layout::kRCP, x.slots_used, w.scale * x.scale, std::move(y.cts)};
}

void serialize(const slot::Backend& backend, const EncMatrix& e, ByteWriter& out) {
  check_shape(e);
  out.put_magic(kMatrixMagic);
  out.put_u32(kMatrixVersion);
  out.put_u64(e.rows);
  out.put_u64(e.cols);
  out.put_u8(static_cast<std::uint8_t>(e.layout));
  out.put_u64(e.slots_used);
  out.put_i64(e.scale);
  out.put_u64(e.cts.size());
  for (const auto& c : e.cts) backend.serialize(c, out);
}

EncMatrix deserialize_matrix(slot::Backend& backend, ByteReader& in) {
  in.expect_magic(kMatrixMagic);
  if (in.get_u32() != kMatrixVersion) throw FormatError("unsupported matrix version");
  EncMatrix e;
  e.rows = in.get_u64();
  e.cols = in.get_u64();
  const std::uint8_t layout = in.get_u8();
  if (layout > static_cast<std::uint8_t>(Layout::kCCP)) throw FormatError("unknown layout");
  e.layout = static_cast<Layout>(layout);
  e.slots_used = in.get_u64();
  e.scale = in.get_i64();
  check_slots(backend, e.slots_used);
  const std::uint64_t count = in.get_u64();
  if (count != ciphertext_count(e.layout, e.rows, e.cols, e.slots_used)) {
    throw FormatError("ciphertext count does not match the layout");
  }
  for (std::uint64_t i = 0; i < count; ++i) e.cts.push_back(backend.deserialize(in));
  return e;
}

}  // namespace hepack::hemat
