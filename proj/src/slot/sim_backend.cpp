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

#include "hepack/slot/sim_backend.hpp"

#include <algorithm>

#include "hepack/common/error.hpp"

namespace hepack::slot {

namespace {

constexpr std::string_view kSimMagic = "SIM1";

struct SimCiphertext final : CiphertextData {
  explicit SimCiphertext(std::vector<std::uint64_t> r) : residues(std::move(r)) {}
  std::vector<std::uint64_t> residues;
};

const SimCiphertext& as_sim(const CiphertextData& c) {
  const auto* sim = dynamic_cast<const SimCiphertext*>(&c);
  if (sim == nullptr) throw ParamMismatch("ciphertext does not belong to the simulator");
  return *sim;
}

}  // namespace

SimBackend::SimBackend(BackendParams params) : Backend(std::move(params)), t_(plain_modulus()) {}

std::span<const std::uint64_t> SimBackend::residues(const Ciphertext& c) const {
  return c.data<SimCiphertext>().residues;
}

std::vector<std::uint64_t> SimBackend::reduce_plain(const PlainVec& v) const {
  std::vector<std::uint64_t> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = t_.from_signed(v[i]);
  return r;
}

std::shared_ptr<CiphertextData> SimBackend::do_encrypt(const PlainVec& v) {
  return std::make_shared<SimCiphertext>(reduce_plain(v));
}

PlainVec SimBackend::do_decrypt(const CiphertextData& c) {
  const auto& r = as_sim(c).residues;
  PlainVec out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = t_.centered(r[i]);
  return out;
}

std::shared_ptr<CiphertextData> SimBackend::do_add(const CiphertextData& a, const CiphertextData& b) {
  const auto& x = as_sim(a).residues;
  const auto& y = as_sim(b).residues;
  std::vector<std::uint64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t_.add(x[i], y[i]);
  return std::make_shared<SimCiphertext>(std::move(out));
}

std::shared_ptr<CiphertextData> SimBackend::do_add_plain(const CiphertextData& a, const PlainVec& w) {
  const auto& x = as_sim(a).residues;
  std::vector<std::uint64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t_.add(x[i], t_.from_signed(w[i]));
  return std::make_shared<SimCiphertext>(std::move(out));
}

std::shared_ptr<CiphertextData> SimBackend::do_mult(const CiphertextData& a, const CiphertextData& b) {
  const auto& x = as_sim(a).residues;
  const auto& y = as_sim(b).residues;
  std::vector<std::uint64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t_.mul(x[i], y[i]);
  return std::make_shared<SimCiphertext>(std::move(out));
}

std::shared_ptr<CiphertextData> SimBackend::do_cmult(const CiphertextData& a, const PlainVec& w) {
  const auto& x = as_sim(a).residues;
  std::vector<std::uint64_t> out(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] != 0 && x[i] != 0) out[i] = t_.mul(x[i], t_.from_signed(w[i]));
  }
  return std::make_shared<SimCiphertext>(std::move(out));
}

std::shared_ptr<CiphertextData> SimBackend::do_rotate(const CiphertextData& a, std::size_t offset) {
  const auto& x = as_sim(a).residues;
  std::vector<std::uint64_t> out(x.size());
  std::rotate_copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(offset), x.end(), out.begin());
  return std::make_shared<SimCiphertext>(std::move(out));
}

void SimBackend::do_serialize(const CiphertextData& c, ByteWriter& out) const {
  const auto& r = as_sim(c).residues;
  out.put_magic(kSimMagic);
  out.put_u64(r.size());
  out.put_u64_array(r);
}

std::shared_ptr<CiphertextData> SimBackend::do_deserialize(ByteReader& in) {
  in.expect_magic(kSimMagic);
  const std::uint64_t n = in.get_u64();
  if (n != slot_count()) throw FormatError("simulator ciphertext has wrong slot count");
  std::vector<std::uint64_t> r(n);
  in.get_u64_array(r);
  for (std::uint64_t v : r) {
    if (v >= plain_modulus()) throw FormatError("simulator residue out of range");
  }
  return std::make_shared<SimCiphertext>(std::move(r));
}

}  // namespace hepack::slot
