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

#ifndef HEPACK_FV_SCHEME_HPP_
#define HEPACK_FV_SCHEME_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "hepack/fv/context.hpp"

namespace hepack::fv {

struct SecretKey {
  std::vector<std::int64_t> coeffs;  // ternary
  RnsPoly ntt_qp;                    // kQP, NTT form
};

struct PublicKey {
  RnsPoly p0, p1;  // kQ, NTT form; p0 = -(p1 * s + e)
};

// Switches a ciphertext component from key s' to s. Row i encrypts
// P * g_i * s' where g_i is the CRT idempotent of q_i; the component is
// decomposed into its q_i residues before the inner product.
struct KeySwitchKey {
  std::vector<RnsPoly> b, a;  // kQP, NTT form
};

// Evaluation keys may be shared across threads once generated.
struct KeySet {
  SecretKey secret;
  PublicKey pub;
  KeySwitchKey relin;
  std::map<std::uint64_t, KeySwitchKey> galois;  // keyed by Galois element

  bool has_rotation(const FvContext& ctx, std::size_t offset) const {
    return galois.count(ctx.galois_element(offset)) != 0;
  }
};

// Plaintext polynomial with coefficients in [0, t).
struct Plaintext {
  std::vector<std::uint64_t> coeffs;
};

// Two-component ciphertext, coefficient form over q.
struct FvCiphertext {
  RnsPoly c0, c1;
};

// The power-of-two offsets 1, 2, 4, ..., slot_count / 2.
std::set<std::size_t> power_of_two_rotations(std::size_t slot_count);

class FvScheme {
 public:
  FvScheme(std::shared_ptr<const FvContext> context, std::uint64_t seed);

  const FvContext& context() const { return *ctx_; }
  std::shared_ptr<const FvContext> shared_context() const { return ctx_; }

  // Galois keys are generated for every offset in `rotation_offsets`
  // (reduced mod slot_count, zero dropped).
  KeySet keygen(const std::set<std::size_t>& rotation_offsets);

  Plaintext encode(std::span<const std::int64_t> slots) const;
  std::vector<std::int64_t> decode(const Plaintext& p) const;  // centered

  FvCiphertext encrypt(const PublicKey& pk, const Plaintext& m);
  Plaintext decrypt(const SecretKey& sk, const FvCiphertext& c) const;
  // Invariant noise budget in bits; zero means decryption may fail.
  int noise_budget(const SecretKey& sk, const FvCiphertext& c) const;

  FvCiphertext add(const FvCiphertext& a, const FvCiphertext& b) const;
  FvCiphertext add_plain(const FvCiphertext& a, const Plaintext& m) const;
  FvCiphertext multiply_plain(const FvCiphertext& a, const Plaintext& m) const;
  FvCiphertext multiply(const FvCiphertext& a, const FvCiphertext& b,
                        const KeySwitchKey& relin) const;
  // Left rotation by offset in [1, slot_count). Uses the key for the offset
  // itself if present, otherwise chains power-of-two keys.
  FvCiphertext rotate(const FvCiphertext& a, std::size_t offset, const KeySet& keys) const;
  FvCiphertext apply_galois(const FvCiphertext& a, std::uint64_t g, const KeySwitchKey& key) const;

 private:
  std::vector<std::int64_t> sample_ternary();
  std::vector<std::int64_t> sample_error();
  RnsPoly sample_uniform(Basis b);
  KeySwitchKey make_switch_key(const SecretKey& sk, const RnsPoly& target_ntt_qp);
  // Returns (u0, u1) over q with u0 + u1 * s ~ c * s'.
  std::pair<RnsPoly, RnsPoly> key_switch(const RnsPoly& c, const KeySwitchKey& key) const;
  RnsPoly scaled_plain(const Plaintext& m) const;

  std::shared_ptr<const FvContext> ctx_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

}  // namespace hepack::fv

#endif  // HEPACK_FV_SCHEME_HPP_
