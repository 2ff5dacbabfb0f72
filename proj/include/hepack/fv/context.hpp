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

#ifndef HEPACK_FV_CONTEXT_HPP_
#define HEPACK_FV_CONTEXT_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hepack/fv/params.hpp"
#include "hepack/fv/rns.hpp"
#include "hepack/math/modulus.hpp"
#include "hepack/math/ntt.hpp"

namespace hepack::fv {

// RNS basis of a polynomial: the ciphertext modulus q, q times the
// key-switching prime P, or q times the auxiliary primes that hold exact
// tensor products.
enum class Basis { kQ, kQP, kExt };

// A polynomial mod (X^n + 1) in RNS form: one length-n residue vector per
// modulus of its basis, stored contiguously.
struct RnsPoly {
  Basis basis = Basis::kQ;
  std::size_t n = 0;
  std::size_t moduli = 0;
  bool ntt_form = false;
  std::vector<std::uint64_t> data;

  std::span<std::uint64_t> component(std::size_t j) { return {data.data() + j * n, n}; }
  std::span<const std::uint64_t> component(std::size_t j) const {
    return {data.data() + j * n, n};
  }
  friend bool operator==(const RnsPoly&, const RnsPoly&) = default;
};

// Primes, transforms and conversion constants for one FvParams. Immutable
// after construction.
class FvContext {
 public:
  explicit FvContext(const FvParams& params);

  const FvParams& params() const { return params_; }
  std::size_t n() const { return params_.ring_dimension; }
  std::size_t slot_count() const { return params_.slot_count(); }
  std::size_t q_count() const { return base_q_.size(); }

  // Global modulus indices of a basis. q primes come first in every basis,
  // so component j < q_count() of any polynomial uses prime q_j.
  std::span<const std::size_t> basis(Basis b) const;
  const math::Modulus& modulus(std::size_t index) const { return moduli_[index]; }
  const math::NttTables& ntt(std::size_t index) const { return *ntts_[index]; }
  std::size_t special_index() const { return q_count(); }

  const RnsBase& base_q() const { return base_q_; }
  const RnsBase& base_aux() const { return base_aux_; }
  std::vector<std::uint64_t> q_primes() const;
  std::uint64_t special_prime() const { return moduli_[special_index()].value(); }

  const math::Modulus& plain_modulus() const { return plain_; }
  const math::NttTables& plain_ntt() const { return *plain_ntt_; }
  // Position of slot i in the plaintext NTT evaluation vector.
  std::size_t slot_to_eval(std::size_t slot) const { return slot_to_eval_[slot]; }
  // Galois element 3^r mod 2n; X -> X^g rotates the slots left by r.
  std::uint64_t galois_element(std::size_t rotation) const;

  // Parameter fingerprint covering n, t and the concrete primes.
  std::uint64_t fingerprint() const { return fingerprint_; }

  RnsPoly zero(Basis b, bool ntt_form = false) const;
  void to_ntt(RnsPoly& p) const;
  void from_ntt(RnsPoly& p) const;
  RnsPoly from_signed(std::span<const std::int64_t> coeffs, Basis b) const;
  void add_inplace(RnsPoly& a, const RnsPoly& b) const;
  void sub_inplace(RnsPoly& a, const RnsPoly& b) const;
  void negate_inplace(RnsPoly& a) const;
  // Pointwise product of two NTT-form polynomials over the same basis.
  RnsPoly multiply(const RnsPoly& a, const RnsPoly& b) const;
  void multiply_accumulate(RnsPoly& acc, const RnsPoly& a, const RnsPoly& b) const;
  // X -> X^g (g odd) on a coefficient-form polynomial.
  RnsPoly automorphism(const RnsPoly& p, std::uint64_t g) const;

  // kQ coefficient form -> kExt coefficient form, centered lift.
  RnsPoly lift_to_ext(const RnsPoly& p) const;
  // kExt coefficient form holding an integer polynomial X -> kQ coefficient
  // form of round(t * X / q).
  RnsPoly scale_down(const RnsPoly& p) const;
  // kQP coefficient form -> kQ coefficient form of round(X / P).
  RnsPoly mod_down(const RnsPoly& p) const;
  // kQ coefficient form holding X in [0, q) -> round(t * X / q) mod t.
  std::vector<std::uint64_t> decrypt_scale(const RnsPoly& p) const;
  // log2 of the largest |[t * X]_q| over the coefficients of a kQ poly.
  double log2_scaled_residue(const RnsPoly& p) const;

  // Residues of floor(q / t) mod q_j.
  std::uint64_t delta(std::size_t j) const { return delta_[j]; }

 private:
  FvParams params_;
  std::vector<math::Modulus> moduli_;
  std::vector<std::unique_ptr<math::NttTables>> ntts_;
  std::vector<std::size_t> basis_q_, basis_qp_, basis_ext_;
  RnsBase base_q_, base_aux_;
  math::Modulus plain_;
  std::unique_ptr<math::NttTables> plain_ntt_;
  std::vector<std::size_t> slot_to_eval_;
  std::vector<std::uint64_t> delta_;
  // Constants for scale_down / decrypt_scale. "half" is (q - 1) / 2.
  std::vector<std::uint64_t> half_mod_q_, half_mod_aux_, q_inv_mod_aux_, aux_mod_q_,
      q_mod_aux_, t_mod_q_, t_mod_aux_;
  std::uint64_t half_mod_t_ = 0, q_inv_mod_t_ = 0;
  // Constants for mod_down.
  std::vector<std::uint64_t> p_inv_mod_q_, p_mod_q_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace hepack::fv

#endif  // HEPACK_FV_CONTEXT_HPP_
