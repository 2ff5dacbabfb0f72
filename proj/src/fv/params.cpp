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

#include "hepack/fv/params.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "hepack/common/error.hpp"
#include "hepack/math/modulus.hpp"

namespace hepack::fv {

FvParams FvParams::desk() { return FvParams{}; }

FvParams FvParams::for_profile(const slot::BackendParams& profile) {
  FvParams p;
  p.ring_dimension = profile.ring_dimension;
  p.plain_modulus = profile.plain_modulus;
  p.coeff_prime_count = (profile.coeff_modulus_bits + 59) / 60;
  p.coeff_prime_bits = 60;
  p.verified_depth = profile.depth_budget;
  return p;
}

void FvParams::validate() const {
  if (ring_dimension < 8 || !std::has_single_bit(ring_dimension)) {
    throw ParameterError("ring_dimension must be a power of two >= 8");
  }
  if (coeff_prime_count == 0 || 2 * coeff_prime_count + 3 > 32) {
    throw ParameterError("coeff_prime_count out of range");
  }
  if (coeff_prime_bits < 30 || coeff_prime_bits > 61 || special_prime_bits < 30 ||
      special_prime_bits > 61) {
    throw ParameterError("prime sizes must be between 30 and 61 bits");
  }
  if (plain_modulus < 3 || plain_modulus >= (std::uint64_t{1} << 61) ||
      !math::is_prime(plain_modulus)) {
    throw ParameterError("plain_modulus must be a prime below 2^61");
  }
  if (plain_modulus % (2 * ring_dimension) != 1) {
    throw ParameterError("plain_modulus " + std::to_string(plain_modulus) +
                         " is not 1 mod 2n; batching needs a primitive 2n-th root of unity");
  }
  if (static_cast<double>(coeff_modulus_bits()) - 1 <= std::log2(static_cast<double>(plain_modulus))) {
    throw ParameterError("coefficient modulus must exceed the plaintext modulus");
  }
  if (!(error_stddev > 0)) throw ParameterError("error_stddev must be positive");
}

std::string FvParams::describe() const {
  std::ostringstream os;
  os << "n=" << ring_dimension << " q~2^" << coeff_modulus_bits() << " (" << coeff_prime_count
     << "x" << coeff_prime_bits << "-bit) P~2^" << special_prime_bits << " t=" << plain_modulus
     << " sigma=" << error_stddev << " verified_depth=" << verified_depth;
  return os.str();
}

slot::BackendParams FvParams::backend_params(const std::string& name) const {
  return slot::BackendParams{name,          ring_dimension, coeff_modulus_bits(), plain_modulus,
                             slot_count(), verified_depth, 0};
}

}  // namespace hepack::fv
