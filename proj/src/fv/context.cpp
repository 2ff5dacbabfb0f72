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

#include "hepack/fv/context.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "hepack/common/binary_io.hpp"
#include "hepack/common/error.hpp"

namespace hepack::fv {

namespace {

using Buffer = std::array<std::uint64_t, kMaxRnsPrimes>;

void require_same_shape(const RnsPoly& a, const RnsPoly& b, const char* op) {
  if (a.basis != b.basis || a.n != b.n || a.moduli != b.moduli || a.ntt_form != b.ntt_form) {
    throw DimensionError(std::string(op) + ": polynomial shapes differ");
  }
}

std::uint64_t half_mod(std::uint64_t q_mod_m, const math::Modulus& m) {
  // (q - 1) / 2 mod m, for odd q and odd m.
  return m.mul(m.sub(q_mod_m, 1 % m.value()), m.inverse(2));
}

}  // namespace

FvContext::FvContext(const FvParams& params) : params_(params) {
  params_.validate();
  const std::size_t n = params_.ring_dimension;
  const std::uint64_t two_n = 2 * n;
  const std::size_t L = params_.coeff_prime_count;

  std::vector<std::uint64_t> used{params_.plain_modulus};
  const auto q_primes = math::find_primes_congruent_one(params_.coeff_prime_bits, L, two_n, used);
  used.insert(used.end(), q_primes.begin(), q_primes.end());
  const auto special = math::find_primes_congruent_one(params_.special_prime_bits, 1, two_n, used);
  used.push_back(special[0]);

  // Auxiliary primes must hold round(t * X / q) for tensor products X, whose
  // magnitude is below t * n * q.
  const double needed = static_cast<double>(params_.coeff_modulus_bits()) +
                        std::log2(static_cast<double>(params_.plain_modulus)) +
                        std::log2(static_cast<double>(n)) + 4;
  const std::size_t aux_count = static_cast<std::size_t>(std::ceil(needed / 60.0));
  if (L + 1 + aux_count > kMaxRnsPrimes) throw ParameterError("too many RNS primes");
  const auto aux = math::find_primes_congruent_one(61, aux_count, two_n, used);

  for (auto p : q_primes) moduli_.emplace_back(p);
  moduli_.emplace_back(special[0]);
  for (auto p : aux) moduli_.emplace_back(p);
  for (const auto& m : moduli_) ntts_.push_back(std::make_unique<math::NttTables>(m, n));

  for (std::size_t i = 0; i < L; ++i) {
    basis_q_.push_back(i);
    basis_qp_.push_back(i);
    basis_ext_.push_back(i);
  }
  basis_qp_.push_back(L);
  for (std::size_t j = 0; j < aux_count; ++j) basis_ext_.push_back(L + 1 + j);

  base_q_ = RnsBase({moduli_.begin(), moduli_.begin() + static_cast<std::ptrdiff_t>(L)});
  base_aux_ = RnsBase({moduli_.begin() + static_cast<std::ptrdiff_t>(L + 1), moduli_.end()});

  plain_ = math::Modulus(params_.plain_modulus);
  plain_ntt_ = std::make_unique<math::NttTables>(plain_, n);
  slot_to_eval_.resize(n / 2);
  std::uint64_t e = 1;
  for (std::size_t i = 0; i < n / 2; ++i) {
    slot_to_eval_[i] = static_cast<std::size_t>((e - 1) / 2);
    e = (e * 3) % two_n;
  }

  const std::uint64_t t = params_.plain_modulus;
  const std::uint64_t q_mod_t = base_q_.product_mod(plain_);
  for (std::size_t i = 0; i < L; ++i) {
    const auto& qi = moduli_[i];
    delta_.push_back(qi.negate(qi.mul(qi.reduce(q_mod_t), qi.inverse(qi.reduce(t)))));
    half_mod_q_.push_back(half_mod(0, qi));
    t_mod_q_.push_back(qi.reduce(t));
    aux_mod_q_.push_back(base_aux_.product_mod(qi));
    const std::uint64_t p_mod = qi.reduce(special[0]);
    p_mod_q_.push_back(p_mod);
    p_inv_mod_q_.push_back(qi.inverse(p_mod));
  }
  for (std::size_t j = 0; j < aux_count; ++j) {
    const auto& aj = base_aux_[j];
    const std::uint64_t q_mod = base_q_.product_mod(aj);
    q_mod_aux_.push_back(q_mod);
    q_inv_mod_aux_.push_back(aj.inverse(q_mod));
    half_mod_aux_.push_back(half_mod(q_mod, aj));
    t_mod_aux_.push_back(aj.reduce(t));
  }
  half_mod_t_ = half_mod(q_mod_t, plain_);
  q_inv_mod_t_ = plain_.inverse(q_mod_t);

  std::ostringstream os;
  os << "fv;n=" << n << ";t=" << t << ";sigma=" << params_.error_stddev << ";moduli=";
  for (const auto& m : moduli_) os << m.value() << ',';
  fingerprint_ = fnv1a64(os.str());
}

std::span<const std::size_t> FvContext::basis(Basis b) const {
  switch (b) {
    case Basis::kQ:
      return basis_q_;
    case Basis::kQP:
      return basis_qp_;
    case Basis::kExt:
      return basis_ext_;
  }
  throw ParameterError("unknown basis");
}

std::vector<std::uint64_t> FvContext::q_primes() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < q_count(); ++i) out.push_back(moduli_[i].value());
  return out;
}

std::uint64_t FvContext::galois_element(std::size_t rotation) const {
  const std::uint64_t two_n = 2 * n();
  std::uint64_t result = 1, base = 3;
  for (std::size_t r = rotation; r > 0; r >>= 1) {
    if (r & 1) result = (result * base) % two_n;
    base = (base * base) % two_n;
  }
  return result;
}

RnsPoly FvContext::zero(Basis b, bool ntt_form) const {
  RnsPoly p;
  p.basis = b;
  p.n = n();
  p.moduli = basis(b).size();
  p.ntt_form = ntt_form;
  p.data.assign(p.moduli * p.n, 0);
  return p;
}

void FvContext::to_ntt(RnsPoly& p) const {
  if (p.ntt_form) throw DimensionError("polynomial already in NTT form");
  const auto idx = basis(p.basis);
  for (std::size_t j = 0; j < p.moduli; ++j) ntts_[idx[j]]->forward_bit_reversed(p.component(j));
  p.ntt_form = true;
}

void FvContext::from_ntt(RnsPoly& p) const {
  if (!p.ntt_form) throw DimensionError("polynomial already in coefficient form");
  const auto idx = basis(p.basis);
  for (std::size_t j = 0; j < p.moduli; ++j) ntts_[idx[j]]->inverse_bit_reversed(p.component(j));
  p.ntt_form = false;
}

RnsPoly FvContext::from_signed(std::span<const std::int64_t> coeffs, Basis b) const {
  if (coeffs.size() != n()) throw DimensionError("coefficient vector has wrong length");
  RnsPoly p = zero(b);
  const auto idx = basis(b);
  for (std::size_t j = 0; j < p.moduli; ++j) {
    const auto& m = moduli_[idx[j]];
    auto out = p.component(j);
    for (std::size_t k = 0; k < n(); ++k) out[k] = m.from_signed(coeffs[k]);
  }
  return p;
}

void FvContext::add_inplace(RnsPoly& a, const RnsPoly& b) const {
  require_same_shape(a, b, "add");
  const auto idx = basis(a.basis);
  for (std::size_t j = 0; j < a.moduli; ++j) {
    const auto& m = moduli_[idx[j]];
    auto x = a.component(j);
    auto y = b.component(j);
    for (std::size_t k = 0; k < a.n; ++k) x[k] = m.add(x[k], y[k]);
  }
}

void FvContext::sub_inplace(RnsPoly& a, const RnsPoly& b) const {
  require_same_shape(a, b, "sub");
  const auto idx = basis(a.basis);
  for (std::size_t j = 0; j < a.moduli; ++j) {
    const auto& m = moduli_[idx[j]];
    auto x = a.component(j);
    auto y = b.component(j);
    for (std::size_t k = 0; k < a.n; ++k) x[k] = m.sub(x[k], y[k]);
  }
}

void FvContext::negate_inplace(RnsPoly& a) const {
  const auto idx = basis(a.basis);
  for (std::size_t j = 0; j < a.moduli; ++j) {
    const auto& m = moduli_[idx[j]];
    for (auto& x : a.component(j)) x = m.negate(x);
  }
}

RnsPoly FvContext::multiply(const RnsPoly& a, const RnsPoly& b) const {
  RnsPoly out = zero(a.basis, true);
  multiply_accumulate(out, a, b);
  return out;
}

void FvContext::multiply_accumulate(RnsPoly& acc, const RnsPoly& a, const RnsPoly& b) const {
  require_same_shape(a, b, "multiply");
  require_same_shape(acc, a, "multiply");
  if (!a.ntt_form) throw DimensionError("multiply: operands must be in NTT form");
  const auto idx = basis(a.basis);
  for (std::size_t j = 0; j < a.moduli; ++j) {
    const auto& m = moduli_[idx[j]];
    auto z = acc.component(j);
    auto x = a.component(j);
    auto y = b.component(j);
    for (std::size_t k = 0; k < a.n; ++k) z[k] = m.add(z[k], m.mul(x[k], y[k]));
  }
}

RnsPoly FvContext::automorphism(const RnsPoly& p, std::uint64_t g) const {
  if (p.ntt_form) throw DimensionError("automorphism expects coefficient form");
  if (g % 2 == 0) throw ParameterError("Galois element must be odd");
  const std::uint64_t two_n = 2 * n();
  RnsPoly out = zero(p.basis);
  const auto idx = basis(p.basis);
  for (std::size_t j = 0; j < p.moduli; ++j) {
    const auto& m = moduli_[idx[j]];
    auto x = p.component(j);
    auto y = out.component(j);
    std::uint64_t target = 0;
    for (std::size_t k = 0; k < n(); ++k, target = (target + g) % two_n) {
      if (target < n()) {
        y[target] = x[k];
      } else {
        y[target - n()] = m.negate(x[k]);
      }
    }
  }
  return out;
}

RnsPoly FvContext::lift_to_ext(const RnsPoly& p) const {
  if (p.basis != Basis::kQ || p.ntt_form) throw DimensionError("lift_to_ext expects kQ coefficients");
  const std::size_t L = q_count();
  const std::size_t A = base_aux_.size();
  RnsPoly out = zero(Basis::kExt);
  std::copy(p.data.begin(), p.data.end(), out.data.begin());
  Buffer residues{}, digits{};
  for (std::size_t k = 0; k < n(); ++k) {
    for (std::size_t i = 0; i < L; ++i) residues[i] = p.data[i * n() + k];
    base_q_.to_mixed_radix({residues.data(), L}, {digits.data(), L});
    for (std::size_t j = 0; j < A; ++j) {
      out.data[(L + j) * n() + k] =
          base_q_.reduce_centered({digits.data(), L}, base_aux_[j], q_mod_aux_[j]);
    }
  }
  return out;
}

RnsPoly FvContext::scale_down(const RnsPoly& p) const {
  if (p.basis != Basis::kExt || p.ntt_form) throw DimensionError("scale_down expects kExt coefficients");
  const std::size_t L = q_count();
  const std::size_t A = base_aux_.size();
  RnsPoly out = zero(Basis::kQ);
  Buffer zq{}, dq{}, ya{}, da{};
  for (std::size_t k = 0; k < n(); ++k) {
    // Z = t * X + (q - 1) / 2, so floor(Z / q) = round(t * X / q).
    for (std::size_t i = 0; i < L; ++i) {
      const auto& qi = moduli_[i];
      zq[i] = qi.add(qi.mul(p.data[i * n() + k], t_mod_q_[i]), half_mod_q_[i]);
    }
    base_q_.to_mixed_radix({zq.data(), L}, {dq.data(), L});
    for (std::size_t j = 0; j < A; ++j) {
      const auto& aj = base_aux_[j];
      const std::uint64_t z = aj.add(aj.mul(p.data[(L + j) * n() + k], t_mod_aux_[j]), half_mod_aux_[j]);
      const std::uint64_t rem = base_q_.reduce({dq.data(), L}, aj);
      ya[j] = aj.mul(aj.sub(z, rem), q_inv_mod_aux_[j]);
    }
    base_aux_.to_mixed_radix({ya.data(), A}, {da.data(), A});
    for (std::size_t i = 0; i < L; ++i) {
      out.data[i * n() + k] = base_aux_.reduce_centered({da.data(), A}, moduli_[i], aux_mod_q_[i]);
    }
  }
  return out;
}

RnsPoly FvContext::mod_down(const RnsPoly& p) const {
  if (p.basis != Basis::kQP || p.ntt_form) throw DimensionError("mod_down expects kQP coefficients");
  const std::size_t L = q_count();
  const std::uint64_t P = special_prime();
  RnsPoly out = zero(Basis::kQ);
  auto last = p.component(L);
  for (std::size_t i = 0; i < L; ++i) {
    const auto& qi = moduli_[i];
    auto x = p.component(i);
    auto y = out.component(i);
    for (std::size_t k = 0; k < n(); ++k) {
      std::uint64_t r = qi.reduce(last[k]);
      if (last[k] > P / 2) r = qi.sub(r, p_mod_q_[i]);
      y[k] = qi.mul(qi.sub(x[k], r), p_inv_mod_q_[i]);
    }
  }
  return out;
}

std::vector<std::uint64_t> FvContext::decrypt_scale(const RnsPoly& p) const {
  if (p.basis != Basis::kQ || p.ntt_form) throw DimensionError("decrypt_scale expects kQ coefficients");
  const std::size_t L = q_count();
  std::vector<std::uint64_t> out(n());
  Buffer zq{}, dq{};
  for (std::size_t k = 0; k < n(); ++k) {
    for (std::size_t i = 0; i < L; ++i) {
      const auto& qi = moduli_[i];
      zq[i] = qi.add(qi.mul(p.data[i * n() + k], t_mod_q_[i]), half_mod_q_[i]);
    }
    base_q_.to_mixed_radix({zq.data(), L}, {dq.data(), L});
    // (Z - [Z]_q) / q mod t, with Z = t * X + (q - 1) / 2 = (q - 1) / 2 mod t.
    const std::uint64_t rem = base_q_.reduce({dq.data(), L}, plain_);
    out[k] = plain_.mul(plain_.sub(half_mod_t_, rem), q_inv_mod_t_);
  }
  return out;
}

double FvContext::log2_scaled_residue(const RnsPoly& p) const {
  if (p.basis != Basis::kQ || p.ntt_form) throw DimensionError("expected kQ coefficients");
  const std::size_t L = q_count();
  double worst = -INFINITY;
  Buffer r{}, d{};
  for (std::size_t k = 0; k < n(); ++k) {
    for (std::size_t i = 0; i < L; ++i) r[i] = moduli_[i].mul(p.data[i * n() + k], t_mod_q_[i]);
    base_q_.to_mixed_radix({r.data(), L}, {d.data(), L});
    if (base_q_.upper_half({d.data(), L})) {
      for (std::size_t i = 0; i < L; ++i) r[i] = moduli_[i].negate(r[i]);
      base_q_.to_mixed_radix({r.data(), L}, {d.data(), L});
    }
    worst = std::max(worst, base_q_.log2_value({d.data(), L}));
  }
  return worst;
}

}  // namespace hepack::fv
