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

#ifndef HEPACK_FV_PARAMS_HPP_
#define HEPACK_FV_PARAMS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include "hepack/slot/params.hpp"

namespace hepack::fv {

// Textbook FV parameters. The ciphertext modulus q is the product of
// coeff_prime_count NTT-friendly primes just below 2^coeff_prime_bits; key
// switching uses one extra special prime of special_prime_bits.
struct FvParams {
  std::size_t ring_dimension = 4096;
  std::size_t coeff_prime_count = 4;
  int coeff_prime_bits = 60;
  int special_prime_bits = 61;
  std::uint64_t plain_modulus = 1032193;
  double error_stddev = 3.2;
  // Largest multiplicative depth for which decryption has been checked to be
  // exact with these parameters.
  std::size_t verified_depth = 4;

  // n = 2^12, q ~ 2^240, t = 1032193.
  static FvParams desk();
  // Parameters matching a slot profile: same ring, t, and ceil(qbits / 60)
  // primes. verified_depth is copied from the profile's depth budget.
  static FvParams for_profile(const slot::BackendParams& profile);

  // Throws ParameterError unless n is a power of two >= 8, t is prime with
  // t = 1 mod 2n, and q > t.
  void validate() const;

  std::size_t slot_count() const { return ring_dimension / 2; }
  std::size_t coeff_modulus_bits() const {
    return coeff_prime_count * static_cast<std::size_t>(coeff_prime_bits);
  }
  std::string describe() const;

  // The slot-contract view of these parameters.
  slot::BackendParams backend_params(const std::string& name = "fv") const;
};

}  // namespace hepack::fv

#endif  // HEPACK_FV_PARAMS_HPP_
