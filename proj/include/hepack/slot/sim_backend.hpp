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

#ifndef HEPACK_SLOT_SIM_BACKEND_HPP_
#define HEPACK_SLOT_SIM_BACKEND_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hepack/math/modulus.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::slot {

// Exact slot-vector simulator: a ciphertext is its slot residues mod t.
class SimBackend final : public Backend {
 public:
  explicit SimBackend(BackendParams params);

  std::string name() const override { return "sim"; }

  // Raw residues in [0, t) of a simulator ciphertext.
  std::span<const std::uint64_t> residues(const Ciphertext& c) const;

 protected:
  std::shared_ptr<CiphertextData> do_encrypt(const PlainVec& v) override;
  PlainVec do_decrypt(const CiphertextData& c) override;
  std::shared_ptr<CiphertextData> do_add(const CiphertextData& a, const CiphertextData& b) override;
  std::shared_ptr<CiphertextData> do_add_plain(const CiphertextData& a, const PlainVec& w) override;
  std::shared_ptr<CiphertextData> do_mult(const CiphertextData& a, const CiphertextData& b) override;
  std::shared_ptr<CiphertextData> do_cmult(const CiphertextData& a, const PlainVec& w) override;
  std::shared_ptr<CiphertextData> do_rotate(const CiphertextData& a, std::size_t offset) override;
  void do_serialize(const CiphertextData& c, ByteWriter& out) const override;
  std::shared_ptr<CiphertextData> do_deserialize(ByteReader& in) override;

 private:
  std::vector<std::uint64_t> reduce_plain(const PlainVec& v) const;

  math::Modulus t_;
};

}  // namespace hepack::slot

#endif  // HEPACK_SLOT_SIM_BACKEND_HPP_
