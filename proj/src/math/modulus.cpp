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

#include "hepack/math/modulus.hpp"

#include <algorithm>
#include <string>

#include "hepack/common/error.hpp"

namespace hepack::math {

Modulus::Modulus(std::uint64_t value) : value_(value) {
  if (value < 3 || value % 2 == 0 || value >= (std::uint64_t{1} << 62)) {
    throw ParameterError("modulus must be odd and in [3, 2^62): " + std::to_string(value));
  }
  // value is odd, so floor((2^128 - 1) / value) == floor(2^128 / value).
  const u128 ratio = ~u128{0} / value;
  ratio_lo_ = static_cast<std::uint64_t>(ratio);
  ratio_hi_ = static_cast<std::uint64_t>(ratio >> 64);
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t exponent) const {
  std::uint64_t result = 1 % value_;
  base = reduce(base);
  while (exponent) {
    if (exponent & 1) result = mul(result, base);
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

std::uint64_t Modulus::inverse(std::uint64_t a) const {
  // Extended Euclid over signed 128-bit to stay exact for 62-bit moduli.
  __int128 r0 = value_, r1 = reduce(a), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 q = r0 / r1;
    const __int128 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    const __int128 s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw ParameterError("value not invertible mod " + std::to_string(value_));
  if (s0 < 0) s0 += value_;
  return static_cast<std::uint64_t>(s0);
}

std::uint64_t Modulus::from_signed(std::int64_t v) const {
  if (v >= 0) return reduce(static_cast<std::uint64_t>(v));
  // -(v) may overflow for INT64_MIN; go through unsigned negation.
  const std::uint64_t mag = reduce(0 - static_cast<std::uint64_t>(v));
  return negate(mag);
}

namespace {

std::uint64_t mulmod_raw(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_raw(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_raw(r, b, m);
    b = mulmod_raw(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_raw(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_raw(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> find_primes_congruent_one(int bits, std::size_t count,
                                                     std::uint64_t congruence,
                                                     const std::vector<std::uint64_t>& exclude) {
  if (bits < 3 || bits > 62) throw ParameterError("prime size must be in [3, 62] bits");
  std::vector<std::uint64_t> primes;
  const std::uint64_t top = std::uint64_t{1} << bits;
  std::uint64_t candidate = top - (top % congruence) + 1;
  if (candidate >= top) candidate -= congruence;
  while (primes.size() < count) {
    if (candidate <= congruence) throw ParameterError("ran out of NTT-friendly primes");
    if (is_prime(candidate) &&
        std::find(exclude.begin(), exclude.end(), candidate) == exclude.end()) {
      primes.push_back(candidate);
    }
    candidate -= congruence;
  }
  return primes;
}

std::uint64_t minimal_primitive_root(std::uint64_t order, const Modulus& p) {
  const std::uint64_t q = p.value();
  if (order == 0 || (order & (order - 1)) != 0 || (q - 1) % order != 0) {
    throw ParameterError("no primitive root of order " + std::to_string(order) + " mod " +
                         std::to_string(q));
  }
  const std::uint64_t cofactor = (q - 1) / order;
  std::uint64_t best = 0;
  for (std::uint64_t g = 2; g < q; ++g) {
    const std::uint64_t root = p.pow(g, cofactor);
    // For a power-of-two order, primitive iff root^(order/2) == -1.
    if (p.pow(root, order / 2) == q - 1) {
      // Scan all primitive roots (odd powers of this one) for the minimum.
      const std::uint64_t step = p.mul(root, root);
      std::uint64_t r = root;
      best = root;
      for (std::uint64_t i = 0; i < order / 2; ++i) {
        best = std::min(best, r);
        r = p.mul(r, step);
      }
      return best;
    }
  }
  throw ParameterError("primitive root search failed");
}

}  // namespace hepack::math
