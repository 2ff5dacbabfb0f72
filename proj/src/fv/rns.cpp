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

#include "hepack/fv/rns.hpp"

#include <cmath>
#include <limits>

#include "hepack/common/error.hpp"

namespace hepack::fv {

RnsBase::RnsBase(std::vector<math::Modulus> moduli) : moduli_(std::move(moduli)) {
  const std::size_t k = moduli_.size();
  if (k == 0 || k > kMaxRnsPrimes) throw ParameterError("RNS base size out of range");
  inverses_.assign(k * k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const std::uint64_t mj = moduli_[i].reduce(moduli_[j].value());
      if (mj == 0) throw ParameterError("RNS moduli are not coprime");
      inverses_[i * k + j] = moduli_[i].inverse(mj);
    }
  }
  // Digits of M - 1 are m_i - 1; halve them from the top digit down.
  half_digits_.assign(k, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = k; i-- > 0;) {
    const unsigned __int128 v =
        static_cast<unsigned __int128>(carry) * moduli_[i].value() + (moduli_[i].value() - 1);
    half_digits_[i] = static_cast<std::uint64_t>(v / 2);
    carry = static_cast<std::uint64_t>(v % 2);
  }
}

void RnsBase::to_mixed_radix(std::span<const std::uint64_t> residues,
                             std::span<std::uint64_t> digits) const {
  const std::size_t k = moduli_.size();
  for (std::size_t i = 0; i < k; ++i) {
    const math::Modulus& mi = moduli_[i];
    std::uint64_t v = residues[i];
    const std::uint64_t* inv = inverses_.data() + i * k;
    for (std::size_t j = 0; j < i; ++j) {
      v = mi.mul(mi.sub(v, mi.reduce(digits[j])), inv[j]);
    }
    digits[i] = v;
  }
}

std::uint64_t RnsBase::reduce(std::span<const std::uint64_t> digits, const math::Modulus& p) const {
  const std::size_t k = moduli_.size();
  std::uint64_t acc = p.reduce(digits[k - 1]);
  for (std::size_t i = k - 1; i-- > 0;) {
    acc = p.add(p.mul(acc, p.reduce(moduli_[i].value())), p.reduce(digits[i]));
  }
  return acc;
}

bool RnsBase::upper_half(std::span<const std::uint64_t> digits) const {
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    if (digits[i] != half_digits_[i]) return digits[i] > half_digits_[i];
  }
  return false;
}

std::uint64_t RnsBase::product_mod(const math::Modulus& p) const {
  std::uint64_t acc = 1 % p.value();
  for (const auto& m : moduli_) acc = p.mul(acc, p.reduce(m.value()));
  return acc;
}

double RnsBase::log2_value(std::span<const std::uint64_t> digits) const {
  long double value = 0;
  long double weight = 1;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    value += static_cast<long double>(digits[i]) * weight;
    weight *= static_cast<long double>(moduli_[i].value());
  }
  if (value == 0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(std::log2(value));
}

double RnsBase::log2_product() const {
  double bits = 0;
  for (const auto& m : moduli_) bits += std::log2(static_cast<double>(m.value()));
  return bits;
}

}  // namespace hepack::fv
