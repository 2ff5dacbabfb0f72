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

#ifndef HEPACK_MATH_MODULUS_HPP_
#define HEPACK_MATH_MODULUS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hepack::math {

using u128 = unsigned __int128;

// An odd modulus below 2^62 with a precomputed Barrett constant. All
// arithmetic takes and returns residues in [0, value).
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(std::uint64_t value);

  std::uint64_t value() const { return value_; }

  std::uint64_t reduce(std::uint64_t x) const { return x >= value_ ? reduce128(x) : x; }
  std::uint64_t reduce128(u128 x) const {
    const auto lo = static_cast<std::uint64_t>(x);
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    // floor(x * ratio / 2^128), computed exactly from the four partial products.
    const u128 a = static_cast<u128>(lo) * ratio_lo_;
    const u128 b = static_cast<u128>(lo) * ratio_hi_;
    const u128 c = static_cast<u128>(hi) * ratio_lo_;
    const u128 d = static_cast<u128>(hi) * ratio_hi_;
    const u128 mid = (a >> 64) + static_cast<std::uint64_t>(b) + static_cast<std::uint64_t>(c);
    const u128 q = d + (b >> 64) + (c >> 64) + (mid >> 64);
    std::uint64_t r = lo - static_cast<std::uint64_t>(q) * value_;
    if (r >= value_) r -= value_;
    if (r >= value_) r -= value_;
    return r;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + value_ - b;
  }
  std::uint64_t negate(std::uint64_t a) const { return a == 0 ? 0 : value_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce128(static_cast<u128>(a) * b);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exponent) const;
  // Multiplicative inverse; throws ParameterError when none exists.
  std::uint64_t inverse(std::uint64_t a) const;

  // Maps any signed integer to its residue.
  std::uint64_t from_signed(std::int64_t v) const;
  // Centered representative in (-value/2, value/2].
  std::int64_t centered(std::uint64_t r) const {
    return r > value_ / 2 ? static_cast<std::int64_t>(r) - static_cast<std::int64_t>(value_)
                          : static_cast<std::int64_t>(r);
  }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.value_ == b.value_; }

 private:
  std::uint64_t value_ = 0;
  std::uint64_t ratio_lo_ = 0;  // floor(2^128 / value), low word
  std::uint64_t ratio_hi_ = 0;
};

// Precomputed operand for Shoup multiplication by a fixed constant w mod p.
struct ShoupConstant {
  std::uint64_t value = 0;
  std::uint64_t quotient = 0;  // floor(value * 2^64 / p)

  ShoupConstant() = default;
  ShoupConstant(std::uint64_t w, std::uint64_t p)
      : value(w), quotient(static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / p)) {}

  // x * value mod p for x < 2^64, p < 2^63.
  std::uint64_t mul(std::uint64_t x, std::uint64_t p) const {
    const auto q = static_cast<std::uint64_t>((static_cast<u128>(x) * quotient) >> 64);
    std::uint64_t r = x * value - q * p;
    return r >= p ? r - p : r;
  }
};

// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

// The `count` largest primes below 2^bits that are 1 mod `congruence`,
// skipping any listed in `exclude`.
std::vector<std::uint64_t> find_primes_congruent_one(int bits, std::size_t count,
                                                     std::uint64_t congruence,
                                                     const std::vector<std::uint64_t>& exclude = {});

// A primitive `order`-th root of unity mod the prime p (order | p - 1, order a
// power of two). Deterministic: the smallest such root is returned.
std::uint64_t minimal_primitive_root(std::uint64_t order, const Modulus& p);

}  // namespace hepack::math

#endif  // HEPACK_MATH_MODULUS_HPP_
