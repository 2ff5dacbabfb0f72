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

#ifndef HEPACK_FV_RNS_HPP_
#define HEPACK_FV_RNS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hepack/math/modulus.hpp"

namespace hepack::fv {

// Upper bound on the number of primes in one RNS base.
inline constexpr std::size_t kMaxRnsPrimes = 32;

// A set of pairwise coprime word-size moduli with exact conversions between
// residues and mixed-radix digits. For M = m_0 * ... * m_{k-1}, an integer
// x in [0, M) is x = d_0 + d_1 m_0 + d_2 m_0 m_1 + ... with 0 <= d_i < m_i.
class RnsBase {
 public:
  RnsBase() = default;
  explicit RnsBase(std::vector<math::Modulus> moduli);

  std::size_t size() const { return moduli_.size(); }
  const math::Modulus& operator[](std::size_t i) const { return moduli_[i]; }
  const std::vector<math::Modulus>& moduli() const { return moduli_; }

  // Garner's algorithm. residues[i] must already be reduced mod m_i.
  void to_mixed_radix(std::span<const std::uint64_t> residues,
                      std::span<std::uint64_t> digits) const;
  // x mod p.
  std::uint64_t reduce(std::span<const std::uint64_t> digits, const math::Modulus& p) const;
  // True iff x > (M - 1) / 2, i.e. the centered representative is negative.
  bool upper_half(std::span<const std::uint64_t> digits) const;
  // M mod p.
  std::uint64_t product_mod(const math::Modulus& p) const;
  // Centered representative of x, reduced mod p. m_mod_p must be M mod p.
  std::uint64_t reduce_centered(std::span<const std::uint64_t> digits, const math::Modulus& p,
                                std::uint64_t m_mod_p) const {
    const std::uint64_t r = reduce(digits, p);
    return upper_half(digits) ? p.sub(r, m_mod_p) : r;
  }
  // Approximate log2 of x (x > 0); -infinity for x == 0.
  double log2_value(std::span<const std::uint64_t> digits) const;
  double log2_product() const;

 private:
  std::vector<math::Modulus> moduli_;
  // inverses_[i * size + j] = m_j^-1 mod m_i for j < i.
  std::vector<std::uint64_t> inverses_;
  std::vector<std::uint64_t> half_digits_;
};

}  // namespace hepack::fv

#endif  // HEPACK_FV_RNS_HPP_
