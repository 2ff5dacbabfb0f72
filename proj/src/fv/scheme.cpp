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

#include "hepack/fv/scheme.hpp"

#include <cmath>

#include "hepack/common/error.hpp"

namespace hepack::fv {

namespace {

// Components 0..L-1 of a kQP polynomial, as a kQ polynomial.
RnsPoly restrict_to_q(const FvContext& ctx, const RnsPoly& p) {
  RnsPoly out = ctx.zero(Basis::kQ, p.ntt_form);
  std::copy(p.data.begin(), p.data.begin() + static_cast<std::ptrdiff_t>(out.data.size()),
            out.data.begin());
  return out;
}

}  // namespace

std::set<std::size_t> power_of_two_rotations(std::size_t slot_count) {
  std::set<std::size_t> out;
  for (std::size_t r = 1; r < slot_count; r <<= 1) out.insert(r);
  return out;
}

FvScheme::FvScheme(std::shared_ptr<const FvContext> context, std::uint64_t seed)
    : ctx_(std::move(context)), rng_(seed) {
  if (!ctx_) throw ParameterError("FvScheme needs a context");
}

std::vector<std::int64_t> FvScheme::sample_ternary() {
  std::lock_guard lock(rng_mutex_);
  std::uniform_int_distribution<int> dist(-1, 1);
  std::vector<std::int64_t> out(ctx_->n());
  for (auto& x : out) x = dist(rng_);
  return out;
}

std::vector<std::int64_t> FvScheme::sample_error() {
  std::lock_guard lock(rng_mutex_);
  const double sigma = ctx_->params().error_stddev;
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<std::int64_t> out(ctx_->n());
  for (auto& x : out) {
    double v;
    do {
      v = std::round(dist(rng_));
    } while (std::abs(v) > 6 * sigma);
    x = static_cast<std::int64_t>(v);
  }
  return out;
}

RnsPoly FvScheme::sample_uniform(Basis b) {
  std::lock_guard lock(rng_mutex_);
  RnsPoly p = ctx_->zero(b, true);
  const auto idx = ctx_->basis(b);
  for (std::size_t j = 0; j < p.moduli; ++j) {
    std::uniform_int_distribution<std::uint64_t> dist(0, ctx_->modulus(idx[j]).value() - 1);
    for (auto& x : p.component(j)) x = dist(rng_);
  }
  return p;
}

KeySwitchKey FvScheme::make_switch_key(const SecretKey& sk, const RnsPoly& target) {
  const FvContext& ctx = *ctx_;
  KeySwitchKey key;
  for (std::size_t i = 0; i < ctx.q_count(); ++i) {
    RnsPoly a = sample_uniform(Basis::kQP);
    RnsPoly b = ctx.from_signed(sample_error(), Basis::kQP);
    ctx.to_ntt(b);
    ctx.sub_inplace(b, ctx.multiply(a, sk.ntt_qp));
    const auto& qi = ctx.modulus(i);
    const std::uint64_t p_mod = qi.reduce(ctx.special_prime());
    auto bi = b.component(i);
    auto ti = target.component(i);
    for (std::size_t k = 0; k < ctx.n(); ++k) bi[k] = qi.add(bi[k], qi.mul(p_mod, ti[k]));
    key.b.push_back(std::move(b));
    key.a.push_back(std::move(a));
  }
  return key;
}

KeySet FvScheme::keygen(const std::set<std::size_t>& rotation_offsets) {
  const FvContext& ctx = *ctx_;
  KeySet keys;
  keys.secret.coeffs = sample_ternary();
  RnsPoly s_coeff = ctx.from_signed(keys.secret.coeffs, Basis::kQP);
  keys.secret.ntt_qp = s_coeff;
  ctx.to_ntt(keys.secret.ntt_qp);

  const RnsPoly s_q = restrict_to_q(ctx, keys.secret.ntt_qp);
  keys.pub.p1 = sample_uniform(Basis::kQ);
  RnsPoly e = ctx.from_signed(sample_error(), Basis::kQ);
  ctx.to_ntt(e);
  keys.pub.p0 = ctx.multiply(keys.pub.p1, s_q);
  ctx.add_inplace(keys.pub.p0, e);
  ctx.negate_inplace(keys.pub.p0);

  keys.relin = make_switch_key(keys.secret, ctx.multiply(keys.secret.ntt_qp, keys.secret.ntt_qp));

  for (std::size_t offset : rotation_offsets) {
    const std::size_t r = offset % ctx.slot_count();
    if (r == 0) continue;
    const std::uint64_t g = ctx.galois_element(r);
    if (keys.galois.count(g)) continue;
    RnsPoly target = ctx.automorphism(s_coeff, g);
    ctx.to_ntt(target);
    keys.galois.emplace(g, make_switch_key(keys.secret, target));
  }
  return keys;
}

Plaintext FvScheme::encode(std::span<const std::int64_t> slots) const {
  const FvContext& ctx = *ctx_;
  if (slots.size() != ctx.slot_count()) {
    throw DimensionError("encode: expected " + std::to_string(ctx.slot_count()) + " slots, got " +
                         std::to_string(slots.size()));
  }
  Plaintext p;
  p.coeffs.assign(ctx.n(), 0);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    p.coeffs[ctx.slot_to_eval(i)] = ctx.plain_modulus().from_signed(slots[i]);
  }
  ctx.plain_ntt().inverse(p.coeffs);
  return p;
}

std::vector<std::int64_t> FvScheme::decode(const Plaintext& p) const {
  const FvContext& ctx = *ctx_;
  if (p.coeffs.size() != ctx.n()) throw DimensionError("decode: plaintext has wrong length");
  std::vector<std::uint64_t> eval = p.coeffs;
  ctx.plain_ntt().forward(eval);
  std::vector<std::int64_t> out(ctx.slot_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ctx.plain_modulus().centered(eval[ctx.slot_to_eval(i)]);
  }
  return out;
}

RnsPoly FvScheme::scaled_plain(const Plaintext& m) const {
  const FvContext& ctx = *ctx_;
  if (m.coeffs.size() != ctx.n()) throw DimensionError("plaintext has wrong length");
  RnsPoly out = ctx.zero(Basis::kQ);
  for (std::size_t i = 0; i < ctx.q_count(); ++i) {
    const auto& qi = ctx.modulus(i);
    auto y = out.component(i);
    for (std::size_t k = 0; k < ctx.n(); ++k) y[k] = qi.mul(ctx.delta(i), qi.reduce(m.coeffs[k]));
  }
  return out;
}

FvCiphertext FvScheme::encrypt(const PublicKey& pk, const Plaintext& m) {
  const FvContext& ctx = *ctx_;
  RnsPoly u = ctx.from_signed(sample_ternary(), Basis::kQ);
  ctx.to_ntt(u);
  FvCiphertext c{ctx.multiply(pk.p0, u), ctx.multiply(pk.p1, u)};
  ctx.from_ntt(c.c0);
  ctx.from_ntt(c.c1);
  ctx.add_inplace(c.c0, ctx.from_signed(sample_error(), Basis::kQ));
  ctx.add_inplace(c.c1, ctx.from_signed(sample_error(), Basis::kQ));
  ctx.add_inplace(c.c0, scaled_plain(m));
  return c;
}

namespace {

RnsPoly phase(const FvContext& ctx, const SecretKey& sk, const FvCiphertext& c) {
  RnsPoly c1 = c.c1;
  ctx.to_ntt(c1);
  RnsPoly x = ctx.multiply(c1, restrict_to_q(ctx, sk.ntt_qp));
  ctx.from_ntt(x);
  ctx.add_inplace(x, c.c0);
  return x;
}

}  // namespace

Plaintext FvScheme::decrypt(const SecretKey& sk, const FvCiphertext& c) const {
  return Plaintext{ctx_->decrypt_scale(phase(*ctx_, sk, c))};
}

int FvScheme::noise_budget(const SecretKey& sk, const FvCiphertext& c) const {
  const double noise_bits = ctx_->log2_scaled_residue(phase(*ctx_, sk, c));
  const double budget = ctx_->base_q().log2_product() - noise_bits - 1;
  return budget <= 0 ? 0 : static_cast<int>(std::floor(budget));
}

FvCiphertext FvScheme::add(const FvCiphertext& a, const FvCiphertext& b) const {
  FvCiphertext out = a;
  ctx_->add_inplace(out.c0, b.c0);
  ctx_->add_inplace(out.c1, b.c1);
  return out;
}

FvCiphertext FvScheme::add_plain(const FvCiphertext& a, const Plaintext& m) const {
  FvCiphertext out = a;
  ctx_->add_inplace(out.c0, scaled_plain(m));
  return out;
}

FvCiphertext FvScheme::multiply_plain(const FvCiphertext& a, const Plaintext& m) const {
  const FvContext& ctx = *ctx_;
  if (m.coeffs.size() != ctx.n()) throw DimensionError("plaintext has wrong length");
  std::vector<std::int64_t> centered(ctx.n());
  for (std::size_t k = 0; k < ctx.n(); ++k) centered[k] = ctx.plain_modulus().centered(m.coeffs[k]);
  RnsPoly w = ctx.from_signed(centered, Basis::kQ);
  ctx.to_ntt(w);
  FvCiphertext out = a;
  ctx.to_ntt(out.c0);
  ctx.to_ntt(out.c1);
  out.c0 = ctx.multiply(out.c0, w);
  out.c1 = ctx.multiply(out.c1, w);
  ctx.from_ntt(out.c0);
  ctx.from_ntt(out.c1);
  return out;
}

std::pair<RnsPoly, RnsPoly> FvScheme::key_switch(const RnsPoly& c, const KeySwitchKey& key) const {
  const FvContext& ctx = *ctx_;
  if (key.b.size() != ctx.q_count() || key.a.size() != ctx.q_count()) {
    throw ParameterError("key-switching key does not match the parameters");
  }
  const auto qp = ctx.basis(Basis::kQP);
  RnsPoly acc0 = ctx.zero(Basis::kQP, true);
  RnsPoly acc1 = ctx.zero(Basis::kQP, true);
  RnsPoly digit = ctx.zero(Basis::kQP);
  for (std::size_t i = 0; i < ctx.q_count(); ++i) {
    digit.ntt_form = false;
    auto src = c.component(i);
    for (std::size_t j = 0; j < qp.size(); ++j) {
      const auto& m = ctx.modulus(qp[j]);
      auto dst = digit.component(j);
      for (std::size_t k = 0; k < ctx.n(); ++k) dst[k] = m.reduce(src[k]);
    }
    ctx.to_ntt(digit);
    ctx.multiply_accumulate(acc0, digit, key.b[i]);
    ctx.multiply_accumulate(acc1, digit, key.a[i]);
  }
  ctx.from_ntt(acc0);
  ctx.from_ntt(acc1);
  return {ctx.mod_down(acc0), ctx.mod_down(acc1)};
}

FvCiphertext FvScheme::multiply(const FvCiphertext& a, const FvCiphertext& b,
                                const KeySwitchKey& relin) const {
  const FvContext& ctx = *ctx_;
  auto lift = [&](const RnsPoly& p) {
    RnsPoly e = ctx.lift_to_ext(p);
    ctx.to_ntt(e);
    return e;
  };
  const RnsPoly a0 = lift(a.c0), a1 = lift(a.c1);
  const RnsPoly b0 = lift(b.c0), b1 = lift(b.c1);
  RnsPoly d0 = ctx.multiply(a0, b0);
  RnsPoly d1 = ctx.multiply(a0, b1);
  ctx.multiply_accumulate(d1, a1, b0);
  RnsPoly d2 = ctx.multiply(a1, b1);
  ctx.from_ntt(d0);
  ctx.from_ntt(d1);
  ctx.from_ntt(d2);
  FvCiphertext out{ctx.scale_down(d0), ctx.scale_down(d1)};
  auto [u0, u1] = key_switch(ctx.scale_down(d2), relin);
  ctx.add_inplace(out.c0, u0);
  ctx.add_inplace(out.c1, u1);
  return out;
}

FvCiphertext FvScheme::apply_galois(const FvCiphertext& a, std::uint64_t g,
                                    const KeySwitchKey& key) const {
  const FvContext& ctx = *ctx_;
  FvCiphertext out{ctx.automorphism(a.c0, g), ctx.automorphism(a.c1, g)};
  auto [u0, u1] = key_switch(out.c1, key);
  ctx.add_inplace(out.c0, u0);
  out.c1 = std::move(u1);
  return out;
}

FvCiphertext FvScheme::rotate(const FvCiphertext& a, std::size_t offset, const KeySet& keys) const {
  const FvContext& ctx = *ctx_;
  const std::size_t r = offset % ctx.slot_count();
  if (r == 0) return a;
  if (auto it = keys.galois.find(ctx.galois_element(r)); it != keys.galois.end()) {
    return apply_galois(a, it->first, it->second);
  }
  FvCiphertext out = a;
  for (std::size_t bit = 1; bit < ctx.slot_count(); bit <<= 1) {
    if ((r & bit) == 0) continue;
    const std::uint64_t g = ctx.galois_element(bit);
    auto it = keys.galois.find(g);
    if (it == keys.galois.end()) {
      throw ParameterError("no Galois key for rotation " + std::to_string(bit) +
                           " (needed for offset " + std::to_string(r) + ")");
    }
    out = apply_galois(out, g, it->second);
  }
  return out;
}

}  // namespace hepack::fv
