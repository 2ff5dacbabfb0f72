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
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "hepack/common/error.hpp"
#include "hepack/common/parallel.hpp"
#include "hepack/slot/sim_backend.hpp"

namespace hepack::slot {
namespace {

BackendParams small_params(std::size_t slots, std::uint64_t t = 17, std::size_t budget = 3) {
  return {"test", slots, 60, t, slots, budget, 0};
}

// Scalar oracle: centered representative of v mod t, independent of Modulus.
std::int64_t centered_mod(__int128 v, std::int64_t t) {
  __int128 r = v % t;
  if (r < 0) r += t;
  if (r > t / 2) r -= t;
  return static_cast<std::int64_t>(r);
}

PlainVec random_vec(std::mt19937_64& rng, std::size_t n, std::int64_t t) {
  std::uniform_int_distribution<std::int64_t> dist(-(t - 1) / 2, (t - 1) / 2);
  PlainVec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

TEST(ParamsTest, ProfilesValidate) {
  for (const auto& [name, p] : builtin_profiles()) {
    EXPECT_NO_THROW(p.validate()) << name;
    EXPECT_EQ(p.slot_count, p.ring_dimension / 2) << name;
  }
  EXPECT_EQ(profile("mnist").plain_modulus, 4398047232001ULL);
  EXPECT_EQ(profile("retina").plain_modulus, 4503599627763713ULL);
  EXPECT_EQ(profile("mnist").depth_budget, 8u);
  EXPECT_EQ(profile("retina").depth_budget, 10u);
  EXPECT_EQ(profile("desk").plain_modulus % (2 * profile("desk").ring_dimension), 1u);
  EXPECT_THROW(profile("nope"), ParameterError);
  BackendParams bad = small_params(4);
  bad.ring_dimension = 6;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = small_params(4, 10);
  EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(SimBackendTest, EncryptExamples) {
  SimBackend be(small_params(4));
  const auto zero = be.encrypt(PlainVec(4));
  EXPECT_EQ(zero.level(), 0u);
  EXPECT_EQ(be.decrypt(zero), PlainVec(4));
  const auto c = be.encrypt({1, 2, 3, 4});
  EXPECT_EQ(std::vector<std::uint64_t>(be.residues(c).begin(), be.residues(c).end()),
            (std::vector<std::uint64_t>{1, 2, 3, 4}));
  const auto neg = be.encrypt({-9, 0, 0, 0});
  EXPECT_EQ(be.residues(neg)[0], 8u);
  EXPECT_EQ(be.decrypt(neg)[0], 8);
  EXPECT_EQ(be.cost_report().encrypt_count, 3u);
  EXPECT_THROW(be.encrypt({1, 2, 3}), DimensionError);
  EXPECT_EQ(be.decrypt(be.encrypt({5, 0, 3, 0})), (PlainVec{5, 0, 3, 0}));
}

TEST(SimBackendTest, ArithmeticExamplesModSeventeen) {
  SimBackend be(small_params(2));
  const auto a = be.encrypt({1, 2});
  EXPECT_EQ(be.decrypt(be.add(a, be.encrypt({0, 0}))), (PlainVec{1, 2}));
  EXPECT_EQ(be.decrypt(be.add(a, be.encrypt({3, 4}))), (PlainVec{4, 6}));
  const auto nines = be.encrypt({9, 9});
  const auto sum = be.add(nines, nines);
  EXPECT_EQ(be.residues(sum)[0], static_cast<std::uint64_t>((9 + 9) % 17));
  EXPECT_EQ(be.decrypt(sum), (PlainVec{1, 1}));

  const auto prod = be.mult(be.encrypt({2, 3}), be.encrypt({5, 7}));
  EXPECT_EQ(be.residues(prod)[0], 10u);
  EXPECT_EQ(be.residues(prod)[1], static_cast<std::uint64_t>((3 * 7) % 17));
  EXPECT_EQ(be.decrypt(prod), (PlainVec{centered_mod(10, 17), 4}));
  EXPECT_EQ(prod.level(), 1u);
  const auto same = be.mult(a, be.encrypt({1, 1}));
  EXPECT_EQ(be.decrypt(same), (PlainVec{1, 2}));
  EXPECT_EQ(same.level(), 1u);

  const auto cm = be.cmult(be.encrypt({3, 4}), {-1, 2});
  EXPECT_EQ(be.residues(cm)[0], 14u);
  EXPECT_EQ(be.residues(cm)[1], 8u);
  EXPECT_EQ(be.decrypt(cm), (PlainVec{-3, 8}));
  EXPECT_EQ(be.cmult(a, {1, 1}).level(), 1u);
}

TEST(SimBackendTest, OneHotMaskKeepsSingleSlot) {
  SimBackend be(small_params(4));
  const auto c = be.encrypt({5, 6, 7, 8});
  EXPECT_EQ(be.decrypt(be.cmult(c, PlainVec::one_hot(4, 2))), (PlainVec{0, 0, 7, 0}));
}

TEST(SimBackendTest, RotationExamples) {
  SimBackend be(small_params(4));
  const auto c = be.encrypt({1, 2, 3, 4});
  EXPECT_EQ(be.decrypt(be.rotate(c, 0)), (PlainVec{1, 2, 3, 4}));
  EXPECT_EQ(be.decrypt(be.rotate(c, 1)), (PlainVec{2, 3, 4, 1}));
  EXPECT_EQ(be.decrypt(be.rotate(c, -1)), (PlainVec{4, 1, 2, 3}));
  EXPECT_EQ(be.decrypt(be.rotate(c, 9)), (PlainVec{2, 3, 4, 1}));
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(be.decrypt(be.rotate(be.rotate(c, k), 4 - k)), (PlainVec{1, 2, 3, 4}));
  }
  EXPECT_EQ(be.rotate(c, 3).level(), 0u);
}

TEST(SimBackendTest, RotationComposition) {
  std::mt19937_64 rng(3);
  SimBackend be(small_params(32, 1032193));
  const auto c = be.encrypt(random_vec(rng, 32, 1032193));
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t i = static_cast<std::int64_t>(rng() % 100) - 50;
    const std::int64_t j = static_cast<std::int64_t>(rng() % 100) - 50;
    EXPECT_EQ(be.decrypt(be.rotate(be.rotate(c, i), j)), be.decrypt(be.rotate(c, i + j)));
  }
}

TEST(SimBackendTest, PartialSumExamples) {
  SimBackend be(small_params(4, 17, 3));
  const auto s = be.decrypt(be.partial_sum(be.encrypt({1, 2, 3, 4}), 2));
  EXPECT_EQ(s[0], 3);
  EXPECT_EQ(s[2], 7);
  EXPECT_EQ(be.decrypt(be.partial_sum(be.encrypt({1, 2, 3, 4}), 1)), (PlainVec{1, 2, 3, 4}));
  EXPECT_EQ(be.decrypt(be.partial_sum(be.encrypt({5, 5, 5, 5}), 4))[0], centered_mod(20, 17));
  EXPECT_THROW(be.partial_sum(be.encrypt({1, 2, 3, 4}), 5), DimensionError);
  EXPECT_THROW(be.partial_sum(be.encrypt({1, 2, 3, 4}), 0), DimensionError);
}

TEST(SimBackendTest, AllSumExamples) {
  SimBackend be(small_params(8, 1032193));
  EXPECT_EQ(be.decrypt(be.all_sum(be.encrypt({0, 0, 0, 0, 0, 0, 0, 0}), 5))[0], 0);
  EXPECT_EQ(be.decrypt(be.all_sum(be.encrypt({1, 2, 3, 4, 0, 0, 0, 0}), 4))[0], 10);
  EXPECT_EQ(be.decrypt(be.all_sum(be.encrypt({42, 0, 0, 0, 0, 0, 0, 0}), 8))[0], 42);
  EXPECT_EQ(be.decrypt(be.all_sum(be.encrypt({1, 2, 3, 0, 0, 0, 0, 0}), 3))[0], 6);
  EXPECT_THROW(be.all_sum(be.encrypt(PlainVec(8)), 0), DimensionError);
}

// Window sums at block starts and the total at slot 0, against direct
// summation, for every block/region size in {1, ..., 32} including
// non-powers of two.
TEST(SimBackendTest, FoldingAgainstDirectSummation) {
  std::mt19937_64 rng(5);
  const std::int64_t t = 1032193;
  SimBackend be(small_params(64, t));
  for (std::size_t block = 1; block <= 32; ++block) {
    const PlainVec v = random_vec(rng, 64, t);
    const auto before = be.cost_report();
    const auto ps = be.decrypt(be.partial_sum(be.encrypt(v), block));
    const auto delta = be.cost_report() - before;
    const int floor_log = std::bit_width(block) - 1;
    EXPECT_EQ(delta.rotation_count,
              static_cast<std::uint64_t>(floor_log + std::popcount(block) - 1));
    EXPECT_EQ(delta.cmult_count, 0u);
    for (std::size_t start = 0; start + block <= 64; start += block) {
      __int128 expected = 0;
      for (std::size_t i = start; i < start + block; ++i) expected += v[i];
      EXPECT_EQ(ps[start], centered_mod(expected, t)) << "block=" << block;
    }

    PlainVec head(64);
    __int128 total = 0;
    for (std::size_t i = 0; i < block; ++i) {
      head[i] = v[i];
      total += v[i];
    }
    const auto before_all = be.cost_report();
    EXPECT_EQ(be.decrypt(be.all_sum(be.encrypt(head), block))[0], centered_mod(total, t));
    EXPECT_EQ((be.cost_report() - before_all).rotation_count,
              static_cast<std::uint64_t>(std::bit_width(block - 1)));
  }
}

TEST(SimBackendTest, HomomorphismAgainstScalarOracle) {
  std::mt19937_64 rng(9);
  for (std::int64_t t : {17LL, 1032193LL, 4398047232001LL, 4503599627763713LL}) {
    SimBackend be(small_params(16, static_cast<std::uint64_t>(t)));
    for (int trial = 0; trial < 20; ++trial) {
      const PlainVec u = random_vec(rng, 16, t), v = random_vec(rng, 16, t);
      const auto cu = be.encrypt(u), cv = be.encrypt(v);
      const auto sum = be.decrypt(be.add(cu, cv));
      const auto prod = be.decrypt(be.mult(cu, cv));
      const auto plain = be.decrypt(be.cmult(cu, v));
      for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_EQ(sum[i], centered_mod(static_cast<__int128>(u[i]) + v[i], t));
        EXPECT_EQ(prod[i], centered_mod(static_cast<__int128>(u[i]) * v[i], t));
        EXPECT_EQ(plain[i], centered_mod(static_cast<__int128>(u[i]) * v[i], t));
      }
    }
  }
}

TEST(SimBackendTest, DepthLedger) {
  SimBackend be(small_params(4, 17, 3));
  const auto x = be.encrypt({1, 1, 1, 1});
  const auto y = be.mult(x, x);                      // 1
  const auto z = be.cmult(y, {1, 1, 1, 1});          // 2
  const auto w = be.add(be.rotate(z, 1), x);         // still 2
  EXPECT_EQ(w.level(), 2u);
  const auto v = be.mult(w, y);                      // max(2,1)+1 = 3
  EXPECT_EQ(v.level(), 3u);
  EXPECT_EQ(be.cost_report().max_level_used, 3u);
  EXPECT_NO_THROW(be.decrypt(v));
  EXPECT_THROW(be.mult(v, x), BudgetExhausted);
  EXPECT_THROW(be.cmult(v, {1, 1, 1, 1}), BudgetExhausted);
}

TEST(SimBackendTest, ChainBeyondBudgetFails) {
  SimBackend be(small_params(4, 17, 4));
  auto c = be.encrypt({2, 2, 2, 2});
  for (int i = 0; i < 4; ++i) c = be.mult(c, c);
  EXPECT_NO_THROW(be.decrypt(c));
  EXPECT_THROW(c = be.mult(c, c), BudgetExhausted);
}

TEST(SimBackendTest, CostReportCounters) {
  SimBackend be(small_params(4));
  EXPECT_EQ(be.cost_report(), CostReport{});
  const auto a = be.encrypt({1, 2, 3, 4});
  be.reset_counters();
  const auto m = be.mult(a, a);
  const auto s = be.add(m, a);
  const auto r = be.cost_report();
  EXPECT_EQ(r.mult_count, 1u);
  EXPECT_EQ(r.add_count, 1u);
  EXPECT_EQ(r.rotation_count, 0u);
  EXPECT_EQ(r.peak_live_ciphertexts, 3u);
  EXPECT_EQ(r.estimated_ciphertext_bytes, 3u * 2 * 4 * 60 / 8);
}

TEST(SimBackendTest, CountersIndependentOfSchedule) {
  auto run = [](unsigned threads) {
    SimBackend be(small_params(64, 1032193, 4));
    std::mt19937_64 rng(1);
    std::vector<PlainVec> inputs;
    for (int i = 0; i < 32; ++i) inputs.push_back(random_vec(rng, 64, 1032193));
    std::vector<PlainVec> outputs(inputs.size());
    parallel_for(inputs.size(), threads, [&](std::size_t i) {
      const auto c = be.encrypt(inputs[i]);
      const auto p = be.mult(c, be.rotate(c, static_cast<std::int64_t>(i)));
      outputs[i] = be.decrypt(be.all_sum(be.cmult(p, PlainVec::one_hot(64, 0)), 64));
    });
    auto report = be.cost_report();
    report.peak_live_ciphertexts = 0;  // schedule-dependent outside modeled sections
    report.estimated_ciphertext_bytes = 0;
    return std::make_pair(report, outputs);
  };
  const auto serial = run(1);
  const auto parallel = run(4);
  EXPECT_EQ(serial.first, parallel.first);
  EXPECT_EQ(serial.second, parallel.second);
}

TEST(SimBackendTest, SerializationRoundTrip) {
  SimBackend be(small_params(4, 1032193));
  const auto c = be.mult(be.encrypt({-5, 7, 0, 1}), be.encrypt({3, 3, 3, 3}));
  ByteWriter out;
  be.serialize(c, out);
  ByteReader in(out.bytes());
  const auto back = be.deserialize(in);
  EXPECT_TRUE(in.at_end());
  EXPECT_EQ(back.level(), 1u);
  EXPECT_EQ(be.decrypt(back), be.decrypt(c));

  SimBackend other(small_params(4, 17));
  ByteReader again(out.bytes());
  EXPECT_THROW(other.deserialize(again), ParamMismatch);
  EXPECT_THROW(other.add(c, c), ParamMismatch);
}

}  // namespace
}  // namespace hepack::slot
