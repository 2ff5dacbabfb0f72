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
#include "hepack/math/modulus.hpp"
#include "hepack/math/ntt.hpp"

namespace hepack::math {
namespace {

TEST(ModulusTest, MatchesWideArithmetic) {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {17ULL, 1032193ULL, 4398047232001ULL, (1ULL << 61) - 1}) {
    const Modulus m(p);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t a = rng() % p, b = rng() % p;
      EXPECT_EQ(m.mul(a, b), static_cast<std::uint64_t>(static_cast<u128>(a) * b % p));
      EXPECT_EQ(m.add(a, b), static_cast<std::uint64_t>((static_cast<u128>(a) + b) % p));
      EXPECT_EQ(m.sub(a, b), static_cast<std::uint64_t>((static_cast<u128>(a) + p - b) % p));
      const u128 wide = (static_cast<u128>(rng()) << 64) | rng();
      EXPECT_EQ(m.reduce128(wide), static_cast<std::uint64_t>(wide % p));
    }
  }
}

TEST(ModulusTest, SignedAndCenteredRepresentatives) {
  const Modulus m(17);
  EXPECT_EQ(m.from_signed(-9), 8u);
  EXPECT_EQ(m.from_signed(-17), 0u);
  EXPECT_EQ(m.from_signed(INT64_MIN), static_cast<std::uint64_t>(((INT64_MIN % 17) + 17) % 17));
  EXPECT_EQ(m.centered(8), 8);
  EXPECT_EQ(m.centered(9), -8);
  EXPECT_EQ(m.centered(14), -3);
}

TEST(ModulusTest, InverseAndRejection) {
  const Modulus m(1032193);
  for (std::uint64_t a : {1ULL, 2ULL, 12345ULL, 1032192ULL}) EXPECT_EQ(m.mul(a, m.inverse(a)), 1u);
  EXPECT_THROW(m.inverse(0), ParameterError);
  EXPECT_THROW(Modulus(10), ParameterError);
  EXPECT_THROW(Modulus(1), ParameterError);
}

TEST(PrimeTest, KnownValues) {
  EXPECT_TRUE(is_prime(1032193));
  EXPECT_TRUE(is_prime(4398047232001ULL));
  EXPECT_TRUE(is_prime(4503599627763713ULL));
  EXPECT_FALSE(is_prime(1032195));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2,3,5,7
  const auto primes = find_primes_congruent_one(60, 3, 8192);
  ASSERT_EQ(primes.size(), 3u);
  for (auto p : primes) {
    EXPECT_TRUE(is_prime(p));
    EXPECT_EQ(p % 8192, 1u);
    EXPECT_LT(p, 1ULL << 60);
  }
  EXPECT_GT(primes[0], primes[1]);
}

TEST(NttTest, MatchesSchoolbookProduct) {
  std::mt19937_64 rng(11);
  for (std::uint64_t p : std::vector<std::uint64_t>{1032193ULL, find_primes_congruent_one(60, 1, 256)[0]}) {
    const Modulus m(p);
    const NttTables ntt(m, 128);
    std::vector<std::uint64_t> a(128), b(128);
    for (auto& x : a) x = rng() % p;
    for (auto& x : b) x = rng() % p;
    const auto expected = negacyclic_multiply_schoolbook(a, b, m);
    ntt.forward(a);
    ntt.forward(b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = m.mul(a[i], b[i]);
    ntt.inverse(a);
    EXPECT_EQ(a, expected);
  }
}

TEST(NttTest, ForwardEvaluatesAtOddPowersOfPsi) {
  const Modulus m(1032193);
  const NttTables ntt(m, 16);
  std::vector<std::uint64_t> a(16);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = 3 * i + 1;
  auto evals = a;
  ntt.forward(evals);
  for (std::size_t j = 0; j < 16; ++j) {
    const std::uint64_t x = m.pow(ntt.psi(), 2 * j + 1);
    std::uint64_t acc = 0, xp = 1;
    for (std::uint64_t c : a) {
      acc = m.add(acc, m.mul(c, xp));
      xp = m.mul(xp, x);
    }
    EXPECT_EQ(evals[j], acc) << "j=" << j;
  }
  ntt.inverse(evals);
  EXPECT_EQ(evals, a);
}

}  // namespace
}  // namespace hepack::math
