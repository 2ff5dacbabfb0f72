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

#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hepack/common/error.hpp"
#include "hepack/hemat/gather.hpp"
#include "hepack/hemat/matrix.hpp"
#include "hepack/hemat/matvec.hpp"
#include "hepack/slot/sim_backend.hpp"

namespace hepack::hemat {
namespace {

constexpr std::int64_t kT = 1032193;

slot::BackendParams desk() { return slot::profile("desk"); }

std::int64_t centered(__int128 v, std::int64_t t = kT) {
  __int128 r = v % t;
  if (r < 0) r += t;
  if (r > t / 2) r -= t;
  return static_cast<std::int64_t>(r);
}

PlainMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, std::int64_t lo = -7,
                          std::int64_t hi = 7) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  PlainMatrix m(r, c);
  for (auto& x : m.data) x = dist(rng);
  return m;
}

// Schoolbook product reduced to centered residues.
PlainMatrix oracle_mul(const PlainMatrix& a, const PlainMatrix& b) {
  PlainMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      __int128 acc = 0;
      for (std::size_t k = 0; k < a.cols; ++k) acc += static_cast<__int128>(a.at(i, k)) * b.at(k, j);
      c.at(i, j) = centered(acc);
    }
  }
  return c;
}

PlainMatrix identity(std::size_t d) {
  PlainMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1;
  return m;
}

std::vector<std::uint64_t> residues(slot::SimBackend& be, const slot::Ciphertext& c) {
  auto r = be.residues(c);
  return {r.begin(), r.end()};
}

TEST(LayoutTest, CiphertextCountFormulas) {
  EXPECT_EQ(ciphertext_count(Layout::kRCP, 96, 96, 8192), 2u);
  EXPECT_EQ(ciphertext_count(Layout::kCCP, 28, 28, 8192), 1u);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 40, n = 1 + rng() % 40, s = 1 + rng() % 64;
    EXPECT_EQ(ciphertext_count(Layout::kRCP, m, n, s), (m * n + s - 1) / s);
    EXPECT_EQ(ciphertext_count(Layout::kCCP, m, n, s), (m * n + s - 1) / s);
    if (n <= s) {
      EXPECT_EQ(ciphertext_count(Layout::kRP, m, n, s), m);
    }
    if (m <= s) {
      EXPECT_EQ(ciphertext_count(Layout::kCP, m, n, s), n);
    }
  }
  EXPECT_THROW(ciphertext_count(Layout::kRP, 2, 9, 8), LayoutError);
  EXPECT_THROW(ciphertext_count(Layout::kRCP, 0, 9, 8), DimensionError);
}

TEST(LayoutTest, PositionsAreDistinctAndInRange) {
  for (Layout layout : {Layout::kRP, Layout::kCP, Layout::kRCP, Layout::kCCP}) {
    const std::size_t m = 5, n = 7, s = 8;
    const std::size_t k = ciphertext_count(layout, m, n, s);
    std::vector<int> seen(k * s, 0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const SlotPos p = locate(layout, m, n, s, r, c);
        ASSERT_LT(p.ct, k);
        ASSERT_LT(p.slot, s);
        EXPECT_EQ(++seen[p.ct * s + p.slot], 1);
      }
    }
  }
  EXPECT_EQ(parse_layout("rcp"), Layout::kRCP);
  EXPECT_EQ(parse_layout("CCP"), Layout::kCCP);
  EXPECT_THROW(parse_layout("diag"), LayoutError);
}

TEST(PackTest, RowAndColumnCompactExamples) {
  slot::SimBackend be(desk());
  const PlainMatrix m(2, 2, {1, 2, 3, 4});
  const EncMatrix rcp = pack_matrix(be, m, Layout::kRCP, 8);
  ASSERT_EQ(rcp.cts.size(), 1u);
  const auto v = be.decrypt(rcp.cts[0]);
  EXPECT_EQ(std::vector<std::int64_t>(v.values().begin(), v.values().begin() + 6),
            (std::vector<std::int64_t>{1, 2, 3, 4, 0, 0}));
  const auto w = be.decrypt(pack_matrix(be, m, Layout::kCCP, 8).cts[0]);
  EXPECT_EQ(std::vector<std::int64_t>(w.values().begin(), w.values().begin() + 5),
            (std::vector<std::int64_t>{1, 3, 2, 4, 0}));
  const auto before = be.cost_report();
  pack_matrix(be, PlainMatrix(96, 96), Layout::kRCP, 2048);
  EXPECT_EQ((be.cost_report() - before).encrypt_count, 5u);  // ceil(9216 / 2048)
  EXPECT_THROW(pack_matrix(be, m, Layout::kRCP, 0), DimensionError);
  EXPECT_THROW(pack_matrix(be, PlainMatrix(0, 3), Layout::kRCP, 8), DimensionError);
}

TEST(PackTest, RoundTripAllLayouts) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(2);
  for (Layout layout : {Layout::kRP, Layout::kCP, Layout::kRCP, Layout::kCCP}) {
    for (auto [m, n, s] : {std::tuple{3, 5, 8}, {5, 3, 4}, {1, 7, 7}, {6, 6, 2048}, {7, 2, 9}}) {
      if ((layout == Layout::kRP && n > s) || (layout == Layout::kCP && m > s)) {
        EXPECT_THROW(pack_matrix(be, PlainMatrix(m, n), layout, s), LayoutError);
        continue;
      }
      const PlainMatrix a = random_matrix(rng, m, n, -500, 500);
      EXPECT_EQ(unpack_matrix(be, pack_matrix(be, a, layout, s)), a) << to_string(layout);
    }
    const PlainMatrix zero(3, 5);
    EXPECT_EQ(unpack_matrix(be, pack_matrix(be, zero, layout, 8)), zero);
  }
}

TEST(PackTest, LayoutDuality) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng() % 9, n = 1 + rng() % 9, s = 1 + rng() % 30;
    const PlainMatrix a = random_matrix(rng, m, n, -100, 100);
    const auto rcp = pack_matrix(be, a, Layout::kRCP, s);
    const auto ccp = pack_matrix(be, a.transpose(), Layout::kCCP, s);
    ASSERT_EQ(rcp.cts.size(), ccp.cts.size());
    for (std::size_t i = 0; i < rcp.cts.size(); ++i) {
      EXPECT_EQ(residues(be, rcp.cts[i]), residues(be, ccp.cts[i]));
    }
    if (n <= s && m <= s) {
      const auto rp = pack_matrix(be, a, Layout::kRP, s);
      const auto cp = pack_matrix(be, a.transpose(), Layout::kCP, s);
      for (std::size_t i = 0; i < rp.cts.size(); ++i) {
        EXPECT_EQ(residues(be, rp.cts[i]), residues(be, cp.cts[i]));
      }
    }
  }
}

TEST(ConvertTest, SameLayoutIsFree) {
  slot::SimBackend be(desk());
  const auto e = pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 8);
  const auto before = be.cost_report();
  const auto same = convert_layout(be, e, Layout::kRCP);
  const auto delta = be.cost_report() - before;
  EXPECT_EQ(delta.cmult_count + delta.rotation_count + delta.add_count + delta.encrypt_count, 0u);
  EXPECT_EQ(same.level(), 0u);
}

TEST(ConvertTest, Examples) {
  slot::SimBackend be(desk());
  const auto ccp = convert_layout(be, pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 8),
                                  Layout::kCCP);
  const auto v = be.decrypt(ccp.cts[0]);
  EXPECT_EQ(std::vector<std::int64_t>(v.values().begin(), v.values().begin() + 4),
            (std::vector<std::int64_t>{1, 3, 2, 4}));
  EXPECT_EQ(ccp.level(), 1u);

  const auto rcp = convert_layout(be, pack_matrix(be, PlainMatrix(2, 3, {1, 2, 3, 4, 5, 6}), Layout::kRP, 8),
                                  Layout::kRCP);
  ASSERT_EQ(rcp.cts.size(), 1u);
  const auto w = be.decrypt(rcp.cts[0]);
  EXPECT_EQ(std::vector<std::int64_t>(w.values().begin(), w.values().begin() + 8),
            (std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 0, 0}));
}

TEST(ConvertTest, AllPairsPreserveValuesWithOneLevel) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(4);
  const std::vector<Layout> all{Layout::kRP, Layout::kCP, Layout::kRCP, Layout::kCCP};
  for (auto [m, n, s] : {std::tuple{3, 5, 8}, {4, 4, 16}, {6, 3, 7}}) {
    const PlainMatrix a = random_matrix(rng, m, n, -300, 300);
    for (Layout from : all) {
      for (Layout to : all) {
        const auto e = convert_layout(be, pack_matrix(be, a, from, s), to);
        EXPECT_EQ(unpack_matrix(be, e), a) << to_string(from) << "->" << to_string(to);
        EXPECT_EQ(e.level(), from == to ? 0u : 1u);
        EXPECT_EQ(e.cts.size(), ciphertext_count(to, m, n, s));
      }
    }
  }
}

TEST(ConvertTest, BudgetExhausted) {
  slot::SimBackend be(desk().with_depth_budget(0));
  const auto e = pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 8);
  EXPECT_THROW(convert_layout(be, e, Layout::kCCP), BudgetExhausted);
}

TEST(AddTest, ExamplesAndOracle) {
  slot::SimBackend be(desk());
  const auto a = pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 8);
  const auto b = pack_matrix(be, PlainMatrix(2, 2, {5, 6, 7, 8}), Layout::kRCP, 8);
  EXPECT_EQ(unpack_matrix(be, mat_add(be, a, b)), PlainMatrix(2, 2, {6, 8, 10, 12}));
  const auto z = pack_matrix(be, PlainMatrix(2, 2), Layout::kRCP, 8);
  EXPECT_EQ(unpack_matrix(be, mat_add(be, a, z)), unpack_matrix(be, a));
  EXPECT_EQ(mat_add(be, a, b).level(), 0u);

  std::mt19937_64 rng(5);
  const PlainMatrix x = random_matrix(rng, 4, 6, -kT / 2, kT / 2);
  const PlainMatrix y = random_matrix(rng, 4, 6, -kT / 2, kT / 2);
  PlainMatrix expected(4, 6);
  for (std::size_t i = 0; i < x.data.size(); ++i) expected.data[i] = centered(x.data[i] + y.data[i]);
  EXPECT_EQ(unpack_matrix(be, mat_add(be, pack_matrix(be, x, Layout::kCCP, 5),
                                      pack_matrix(be, y, Layout::kCCP, 5))),
            expected);

  const auto c = pack_matrix(be, PlainMatrix(2, 2, {5, 6, 7, 8}), Layout::kCCP, 8);
  EXPECT_THROW(mat_add(be, a, c), LayoutError);
  const auto d = pack_matrix(be, PlainMatrix(2, 3), Layout::kRCP, 8);
  EXPECT_THROW(mat_add(be, a, d), DimensionError);
}

TEST(TransposeTest, RelabelIsFreeAndInvolutive) {
  slot::SimBackend be(desk());
  const auto a = pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 8);
  const auto before = be.cost_report();
  const auto t = mat_transpose(a);
  EXPECT_EQ((be.cost_report() - before).cmult_count, 0u);
  EXPECT_EQ(t.layout, Layout::kCCP);
  EXPECT_EQ(unpack_matrix(be, t), PlainMatrix(2, 2, {1, 3, 2, 4}));
  EXPECT_EQ(residues(be, t.cts[0]), residues(be, a.cts[0]));
  EXPECT_EQ(unpack_matrix(be, mat_transpose(t)), unpack_matrix(be, a));

  const auto row = pack_matrix(be, PlainMatrix(1, 5, {1, 2, 3, 4, 5}), Layout::kRCP, 8);
  const auto col = mat_transpose(row);
  EXPECT_EQ(col.rows, 5u);
  EXPECT_EQ(col.cols, 1u);
  EXPECT_EQ(residues(be, col.cts[0]), residues(be, row.cts[0]));

  std::mt19937_64 rng(6);
  const PlainMatrix m = random_matrix(rng, 3, 5);
  const auto same = mat_transpose(be, pack_matrix(be, m, Layout::kRCP, 8), Layout::kRCP);
  EXPECT_EQ(same.layout, Layout::kRCP);
  EXPECT_EQ(unpack_matrix(be, same), m.transpose());
  EXPECT_EQ(same.level(), 1u);
}

TEST(MatMulTest, SmallExamples) {
  slot::SimBackend be(desk());
  const auto a = pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 2048);
  const auto b = pack_matrix(be, PlainMatrix(2, 2, {5, 6, 7, 8}), Layout::kCCP, 2048);
  EXPECT_EQ(unpack_matrix(be, mat_mul(be, a, b)), PlainMatrix(2, 2, {19, 22, 43, 50}));
  std::mt19937_64 rng(7);
  for (std::size_t d : {1u, 3u, 5u}) {
    const PlainMatrix m = random_matrix(rng, d, d);
    const auto product = mat_mul(be, pack_matrix(be, m, Layout::kRCP, 2048),
                                 pack_matrix(be, identity(d), Layout::kCCP, 2048));
    EXPECT_EQ(unpack_matrix(be, product), m);
  }
  EXPECT_THROW(mat_mul(be, b, a), LayoutError);
}

TEST(MatMulTest, RandomMatchesOracleWithExactCounters) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(8);
  for (std::size_t d : {2u, 3u, 4u, 8u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const PlainMatrix x = random_matrix(rng, d, d), y = random_matrix(rng, d, d);
      const auto a = pack_matrix(be, x, Layout::kRCP, 2048);
      const auto b = pack_matrix(be, y, Layout::kCCP, 2048);
      const auto before = be.cost_report();
      const auto c = mat_mul(be, a, b);
      const auto delta = be.cost_report() - before;
      ASSERT_EQ(unpack_matrix(be, c), oracle_mul(x, y)) << "d=" << d;
      EXPECT_EQ(delta.mult_count, d);
      EXPECT_EQ(delta.cmult_count, d * d);
      const std::size_t log_d = static_cast<std::size_t>(std::bit_width(d - 1));
      EXPECT_LE(delta.rotation_count, d * log_d + d * d + d);
      EXPECT_EQ(c.level(), 2u);
    }
  }
}

TEST(MatMulTest, PowerOfTwoRotationCount) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(9);
  for (std::size_t d : {2u, 4u, 8u, 16u}) {
    const auto a = pack_matrix(be, random_matrix(rng, d, d), Layout::kRCP, 2048);
    const auto b = pack_matrix(be, random_matrix(rng, d, d), Layout::kCCP, 2048);
    const auto before = be.cost_report();
    mat_mul(be, a, b);
    const auto delta = be.cost_report() - before;
    const std::size_t log_d = static_cast<std::size_t>(std::countr_zero(d));
    EXPECT_EQ(delta.rotation_count, d * log_d + d * d);
  }
}

TEST(MatMulTest, FullRingSquare) {
  // d^2 equals the slot count, so rotations wrap without a copy of B.
  slot::SimBackend be({"ring16", 32, 60, 97, 16, 4, 0});
  std::mt19937_64 rng(10);
  const PlainMatrix x = random_matrix(rng, 4, 4), y = random_matrix(rng, 4, 4);
  const auto c = mat_mul(be, pack_matrix(be, x, Layout::kRCP, 16), pack_matrix(be, y, Layout::kCCP, 16));
  PlainMatrix expected = oracle_mul(x, y);
  for (auto& v : expected.data) v = centered(v, 97);
  EXPECT_EQ(unpack_matrix(be, c), expected);
}

TEST(MatMulTest, NonSquareAndMultiCiphertext) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(11);
  for (auto [m, n, p, s] : {std::tuple{3, 5, 2, 2048}, {2, 3, 4, 7}, {5, 5, 5, 16}, {6, 4, 3, 10}}) {
    const PlainMatrix x = random_matrix(rng, m, n), y = random_matrix(rng, n, p);
    const auto c = mat_mul(be, pack_matrix(be, x, Layout::kRCP, s), pack_matrix(be, y, Layout::kCCP, s));
    EXPECT_EQ(unpack_matrix(be, c), oracle_mul(x, y)) << m << "x" << n << "x" << p << " s=" << s;
    EXPECT_EQ(c.cts.size(), ciphertext_count(Layout::kRCP, m, p, s));
    EXPECT_EQ(c.level(), 3u);
  }
}

TEST(MatMulTest, DepthBudget) {
  slot::SimBackend be(desk().with_depth_budget(1));
  const auto a = pack_matrix(be, PlainMatrix(2, 2, {1, 2, 3, 4}), Layout::kRCP, 8);
  const auto b = pack_matrix(be, PlainMatrix(2, 2, {5, 6, 7, 8}), Layout::kCCP, 8);
  EXPECT_THROW(mat_mul(be, a, b), BudgetExhausted);
}

TEST(PlainMatMulTest, Examples) {
  slot::SimBackend be(desk());
  const auto x = pack_matrix(be, PlainMatrix(4, 1, {1, 2, 3, 4}), Layout::kRCP, 2048);
  const auto y = plain_mat_mul(be, PlainMatrix(1, 4, {1, 1, 1, 1}), x);
  EXPECT_EQ(unpack_matrix(be, y), PlainMatrix(1, 1, {10}));
  EXPECT_EQ(y.level(), 2u);
  EXPECT_EQ(unpack_matrix(be, plain_mat_mul(be, identity(4), x)), PlainMatrix(4, 1, {1, 2, 3, 4}));
  EXPECT_THROW(plain_mat_mul(be, identity(3), x), DimensionError);
}

TEST(PlainMatMulTest, RandomTwoCiphertextVector) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(12);
  const PlainMatrix w = random_matrix(rng, 8, 16, -50, 50);
  const PlainMatrix v = random_matrix(rng, 16, 1, -50, 50);
  const auto x = pack_matrix(be, v, Layout::kRCP, 8);
  ASSERT_EQ(x.cts.size(), 2u);
  for (std::size_t threads : {1u, 3u}) {
    const auto y = plain_mat_mul(be, w, x, threads);
    EXPECT_EQ(unpack_matrix(be, y), oracle_mul(w, v));
    EXPECT_EQ(y.cts.size(), 1u);
  }
}

PackedVector pack_vector(slot::Backend& be, const std::vector<std::int64_t>& values, std::size_t s) {
  PackedVector v{values.size(), s, 0, std::nullopt, {}};
  for (std::size_t j = 0; j < packed_count(values.size(), s); ++j) {
    slot::PlainVec p(be.slot_count());
    for (std::size_t i = 0; i < s && j * s + i < values.size(); ++i) p[i] = values[j * s + i];
    v.cts.push_back(be.encrypt(p));
  }
  return v;
}

std::vector<std::int64_t> unpack_vector(slot::Backend& be, const PackedVector& v) {
  std::vector<std::int64_t> out;
  for (std::size_t j = 0; j < v.cts.size(); ++j) {
    const auto p = be.decrypt(v.cts[j]);
    for (std::size_t i = 0; i < v.slots_used && out.size() < v.length; ++i) out.push_back(p[i]);
  }
  return out;
}

TEST(MatvecTest, ZeroSegmentSkipPreservesOutput) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(13);
  std::vector<std::int64_t> x(40);
  for (auto& v : x) v = static_cast<std::int64_t>(rng() % 100) - 50;
  // Rows touching only a few of the five 8-slot segments, like conv rows.
  std::vector<WeightRow> rows;
  for (std::size_t r = 0; r < 12; ++r) {
    WeightRow row;
    row.output_index = r;
    row.bias = static_cast<std::int64_t>(r) - 6;
    for (std::uint32_t k = 0; k < 3; ++k) {
      row.index.push_back(static_cast<std::uint32_t>((r * 3 + k) % 40));
      row.weight.push_back(static_cast<std::int64_t>(k) + 1);
    }
    std::sort(row.index.begin(), row.index.end());
    rows.push_back(row);
  }
  const RowList list(rows, 40);
  const auto in = pack_vector(be, x, 8);

  auto run = [&](bool skip, std::size_t threads) {
    const auto before = be.cost_report();
    const auto y = matvec(be, list, in, {threads, skip});
    return std::pair{unpack_vector(be, y), be.cost_report() - before};
  };
  const auto [with_skip, skip_cost] = run(true, 1);
  const auto [without_skip, full_cost] = run(false, 1);
  EXPECT_EQ(with_skip, without_skip);
  EXPECT_LT(skip_cost.cmult_count, full_cost.cmult_count);

  std::vector<std::int64_t> expected(12);
  for (std::size_t r = 0; r < 12; ++r) {
    const auto dense = rows[r].dense(40);
    std::int64_t acc = rows[r].bias;
    for (std::size_t i = 0; i < 40; ++i) acc += dense[i] * x[i];
    expected[r] = acc;
  }
  EXPECT_EQ(with_skip, expected);

  // Schedule independence.
  const auto [parallel, parallel_cost] = run(true, 4);
  EXPECT_EQ(parallel, with_skip);
  EXPECT_EQ(parallel_cost.cmult_count, skip_cost.cmult_count);
  EXPECT_EQ(parallel_cost.add_count, skip_cost.add_count);
  EXPECT_EQ(parallel_cost.rotation_count, skip_cost.rotation_count);
}

TEST(MatvecTest, AllZeroRowsContributeBiasOnly) {
  slot::SimBackend be(desk());
  const auto in = pack_vector(be, {1, 2, 3}, 2048);
  std::vector<WeightRow> rows(3);
  rows[0] = {{0, 1, 2}, {1, 1, 1}, 5, 0};
  rows[1] = {{}, {}, 9, 1};
  rows[2] = {{1}, {0}, -4, 2};
  const auto y = matvec(be, RowList(rows, 3), in);
  EXPECT_EQ(unpack_vector(be, y), (std::vector<std::int64_t>{11, 9, -4}));
  EXPECT_EQ(y.level(), 2u);

  std::vector<WeightRow> zero(2);
  zero[0] = {{}, {}, 3, 0};
  zero[1] = {{}, {}, 0, 1};
  EXPECT_EQ(unpack_vector(be, matvec(be, RowList(zero, 3), in)), (std::vector<std::int64_t>{3, 0}));
}

TEST(MatvecTest, RejectsMalformedRows) {
  slot::SimBackend be(desk());
  const auto in = pack_vector(be, {1, 2, 3}, 2048);
  EXPECT_THROW(matvec(be, RowList({{{3}, {1}, 0, 0}}, 3), in), DimensionError);
  EXPECT_THROW(matvec(be, RowList({{{2, 1}, {1, 1}, 0, 0}}, 3), in), DimensionError);
  EXPECT_THROW(matvec(be, RowList({{{0}, {1}, 0, 0}}, 4), in), DimensionError);
  EXPECT_THROW(matvec(be, RowList({{{0}, {1}, 0, 5}}, 3), in), DimensionError);
}

TEST(GatherTest, DuplicateMoveRejected) {
  slot::SimBackend be(desk());
  const auto c = be.encrypt(slot::PlainVec(be.slot_count()));
  const std::vector<SlotMove> moves{{0, 1, 0, 0}, {0, 1, 0, 0}};
  EXPECT_THROW(gather(be, std::vector{c}, moves, 1), DimensionError);
}

TEST(SerializeTest, RoundTrip) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(14);
  PlainMatrix m = random_matrix(rng, 3, 7);
  m.scale = 4;
  const auto e = pack_matrix(be, m, Layout::kCCP, 5);
  ByteWriter out;
  serialize(be, e, out);
  ByteReader in(out.bytes());
  const auto back = deserialize_matrix(be, in);
  EXPECT_TRUE(in.at_end());
  EXPECT_EQ(back.layout, Layout::kCCP);
  EXPECT_EQ(back.scale, 4);
  EXPECT_EQ(unpack_matrix(be, back), m);
}

}  // namespace
}  // namespace hepack::hemat
