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

#ifndef HEPACK_MATH_NTT_HPP_
#define HEPACK_MATH_NTT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hepack/math/modulus.hpp"

namespace hepack::math {

// Negacyclic number-theoretic transform over Z_p[X]/(X^n + 1).
//
// forward() maps coefficients a_0..a_{n-1} to evaluations a(psi^(2j+1)) for
// j = 0..n-1 in natural order, where psi is the minimal primitive 2n-th root
// of unity mod p. Pointwise products of transformed vectors correspond to
// negacyclic polynomial products.
class NttTables {
 public:
  NttTables(const Modulus& modulus, std::size_t n);

  const Modulus& modulus() const { return modulus_; }
  std::size_t size() const { return n_; }
  std::uint64_t psi() const { return psi_; }

  void forward(std::span<std::uint64_t> values) const;
  void inverse(std::span<std::uint64_t> values) const;

  // Same transforms with the evaluations in bit-reversed order: index k
  // holds a(psi^(2 rev(k) + 1)). Cheaper when only pointwise products are
  // needed.
  void forward_bit_reversed(std::span<std::uint64_t> values) const;
  void inverse_bit_reversed(std::span<std::uint64_t> values) const;

 private:
  void permute(std::span<std::uint64_t> values) const;

  Modulus modulus_;
  std::size_t n_;
  int log_n_;
  std::uint64_t psi_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<ShoupConstant> psi_rev_;      // psi^rev(k)
  std::vector<ShoupConstant> psi_inv_rev_;  // psi^-rev(k)
  ShoupConstant n_inv_;
};

// Reference O(n^2) negacyclic product, kept for cross-checking the NTT path.
std::vector<std::uint64_t> negacyclic_multiply_schoolbook(std::span<const std::uint64_t> a,
                                                          std::span<const std::uint64_t> b,
                                                          const Modulus& modulus);

}  // namespace hepack::math

#endif  // HEPACK_MATH_NTT_HPP_
