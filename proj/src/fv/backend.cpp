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

#include "hepack/fv/backend.hpp"

#include "hepack/common/error.hpp"
#include "hepack/fv/io.hpp"

namespace hepack::fv {

namespace {

constexpr std::string_view kFvMagic = "FVC1";

struct FvData final : slot::CiphertextData {
  explicit FvData(FvCiphertext c) : ct(std::move(c)) {}
  FvCiphertext ct;
};

const FvCiphertext& as_fv(const slot::CiphertextData& c) {
  const auto* fv = dynamic_cast<const FvData*>(&c);
  if (fv == nullptr) throw ParamMismatch("ciphertext does not belong to the FV backend");
  return fv->ct;
}

std::shared_ptr<slot::CiphertextData> make_data(FvCiphertext c) {
  return std::make_shared<FvData>(std::move(c));
}

}  // namespace

FvBackend::FvBackend(const FvParams& params, std::uint64_t seed,
                     const std::set<std::size_t>& extra_rotations)
    : slot::Backend(params.backend_params()),
      scheme_(std::make_unique<FvScheme>(std::make_shared<const FvContext>(params), seed)) {
  auto offsets = power_of_two_rotations(params.slot_count());
  offsets.insert(extra_rotations.begin(), extra_rotations.end());
  keys_ = std::make_shared<const KeySet>(scheme_->keygen(offsets));
}

FvBackend::FvBackend(std::shared_ptr<const FvContext> context, std::shared_ptr<const KeySet> keys,
                     std::uint64_t seed)
    : slot::Backend(context->params().backend_params()),
      scheme_(std::make_unique<FvScheme>(std::move(context), seed)),
      keys_(std::move(keys)) {
  if (!keys_) throw ParameterError("FvBackend needs a key set");
}

const FvCiphertext& FvBackend::raw(const slot::Ciphertext& c) const { return c.data<FvData>().ct; }

int FvBackend::noise_budget(const slot::Ciphertext& c) const {
  if (keys_->secret.coeffs.empty()) throw ParameterError("noise budget needs the secret key");
  return scheme_->noise_budget(keys_->secret, raw(c));
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_encrypt(const slot::PlainVec& v) {
  return make_data(scheme_->encrypt(keys_->pub, scheme_->encode(v.values())));
}

slot::PlainVec FvBackend::do_decrypt(const slot::CiphertextData& c) {
  if (keys_->secret.coeffs.empty()) throw ParameterError("decryption needs the secret key");
  return slot::PlainVec(scheme_->decode(scheme_->decrypt(keys_->secret, as_fv(c))));
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_add(const slot::CiphertextData& a,
                                                        const slot::CiphertextData& b) {
  return make_data(scheme_->add(as_fv(a), as_fv(b)));
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_add_plain(const slot::CiphertextData& a,
                                                              const slot::PlainVec& w) {
  return make_data(scheme_->add_plain(as_fv(a), scheme_->encode(w.values())));
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_mult(const slot::CiphertextData& a,
                                                         const slot::CiphertextData& b) {
  return make_data(scheme_->multiply(as_fv(a), as_fv(b), keys_->relin));
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_cmult(const slot::CiphertextData& a,
                                                          const slot::PlainVec& w) {
  return make_data(scheme_->multiply_plain(as_fv(a), scheme_->encode(w.values())));
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_rotate(const slot::CiphertextData& a,
                                                           std::size_t offset) {
  return make_data(scheme_->rotate(as_fv(a), offset, *keys_));
}

void FvBackend::do_serialize(const slot::CiphertextData& c, ByteWriter& out) const {
  const FvCiphertext& ct = as_fv(c);
  out.put_magic(kFvMagic);
  out.put_u64(context().fingerprint());
  out.put_u32(2);
  write_poly(out, ct.c0);
  write_poly(out, ct.c1);
}

std::shared_ptr<slot::CiphertextData> FvBackend::do_deserialize(ByteReader& in) {
  in.expect_magic(kFvMagic);
  if (in.get_u64() != context().fingerprint()) {
    throw ParamMismatch("FV ciphertext was written under different primes");
  }
  if (in.get_u32() != 2) throw FormatError("FV ciphertext must have two components");
  FvCiphertext ct;
  ct.c0 = read_poly(in, context());
  ct.c1 = read_poly(in, context());
  if (ct.c0.basis != Basis::kQ || ct.c1.basis != Basis::kQ || ct.c0.ntt_form || ct.c1.ntt_form) {
    throw FormatError("FV ciphertext components must be coefficient-form polynomials mod q");
  }
  return make_data(std::move(ct));
}

}  // namespace hepack::fv
