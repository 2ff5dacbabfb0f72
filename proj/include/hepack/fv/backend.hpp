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

#ifndef HEPACK_FV_BACKEND_HPP_
#define HEPACK_FV_BACKEND_HPP_

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "hepack/fv/scheme.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::fv {

// The slot contract realised by the FV scheme. The depth budget is the
// parameter set's verified depth.
class FvBackend final : public slot::Backend {
 public:
  // Fresh keys with Galois keys for every power-of-two offset plus `extra`.
  FvBackend(const FvParams& params, std::uint64_t seed,
            const std::set<std::size_t>& extra_rotations = {});
  // Existing keys. The secret key may be absent, in which case decrypt throws.
  FvBackend(std::shared_ptr<const FvContext> context, std::shared_ptr<const KeySet> keys,
            std::uint64_t seed);

  std::string name() const override { return "fv"; }

  const FvContext& context() const { return scheme_->context(); }
  const KeySet& keys() const { return *keys_; }
  std::shared_ptr<const KeySet> shared_keys() const { return keys_; }
  const FvCiphertext& raw(const slot::Ciphertext& c) const;
  int noise_budget(const slot::Ciphertext& c) const;

 protected:
  std::shared_ptr<slot::CiphertextData> do_encrypt(const slot::PlainVec& v) override;
  slot::PlainVec do_decrypt(const slot::CiphertextData& c) override;
  std::shared_ptr<slot::CiphertextData> do_add(const slot::CiphertextData& a,
                                               const slot::CiphertextData& b) override;
  std::shared_ptr<slot::CiphertextData> do_add_plain(const slot::CiphertextData& a,
                                                     const slot::PlainVec& w) override;
  std::shared_ptr<slot::CiphertextData> do_mult(const slot::CiphertextData& a,
                                                const slot::CiphertextData& b) override;
  std::shared_ptr<slot::CiphertextData> do_cmult(const slot::CiphertextData& a,
                                                 const slot::PlainVec& w) override;
  std::shared_ptr<slot::CiphertextData> do_rotate(const slot::CiphertextData& a,
                                                  std::size_t offset) override;
  void do_serialize(const slot::CiphertextData& c, ByteWriter& out) const override;
  std::shared_ptr<slot::CiphertextData> do_deserialize(ByteReader& in) override;

 private:
  std::unique_ptr<FvScheme> scheme_;
  std::shared_ptr<const KeySet> keys_;
};

}  // namespace hepack::fv

#endif  // HEPACK_FV_BACKEND_HPP_
