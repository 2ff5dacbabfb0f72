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

#include "hepack/math/ntt.hpp"

#include <bit>
#include <utility>

#include "hepack/common/error.hpp"

namespace hepack::math {

namespace {

// Shoup product with the result left in [0, 2p).
inline std::uint64_t mul_lazy(const ShoupConstant& w, std::uint64_t x, std::uint64_t p) {
  const auto q = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * w.quotient) >> 64);
  return w.value * x - q * p;
}

}  // namespace

NttTables::NttTables(const Modulus& modulus, std::size_t n) : modulus_(modulus), n_(n) {
  if (n < 2 || !std::has_single_bit(n)) throw ParameterError("NTT size must be a power of two");
  if (modulus.value() >= (std::uint64_t{1} << 62)) throw ParameterError("NTT modulus too large");
  log_n_ = std::countr_zero(n);
  psi_ = minimal_primitive_root(2 * n, modulus);
  const std::uint64_t p = modulus.value();
  const std::uint64_t psi_inv = modulus.inverse(psi_);

  bit_reverse_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < log_n_; ++b) r |= ((i >> b) & 1) << (log_n_ - 1 - b);
    bit_reverse_[i] = r;
  }
  std::vector<std::uint64_t> pw(n), pw_inv(n);
  std::uint64_t f = 1, g = 1;
  for (std::size_t i = 0; i < n; ++i) {
    pw[i] = f;
    pw_inv[i] = g;
    f = modulus.mul(f, psi_);
    g = modulus.mul(g, psi_inv);
  }
  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    psi_rev_[k] = ShoupConstant(pw[bit_reverse_[k]], p);
    psi_inv_rev_[k] = ShoupConstant(pw_inv[bit_reverse_[k]], p);
  }
  n_inv_ = ShoupConstant(modulus.inverse(n % p), p);
}

void NttTables::permute(std::span<std::uint64_t> a) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bit_reverse_[i];
    if (i < r) std::swap(a[i], a[r]);
  }
}

void NttTables::forward_bit_reversed(std::span<std::uint64_t> a) const {
  if (a.size() != n_) throw DimensionError("NTT input has wrong length");
  const std::uint64_t p = modulus_.value();
  const std::uint64_t two_p = 2 * p;
  // Cooley-Tukey with psi folded into the twiddles; values stay in [0, 4p).
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const ShoupConstant& w = psi_rev_[m + i];
      std::uint64_t* x = a.data() + 2 * i * t;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        std::uint64_t u = x[j];
        if (u >= two_p) u -= two_p;
        const std::uint64_t v = mul_lazy(w, y[j], p);
        x[j] = u + v;
        y[j] = u - v + two_p;
      }
    }
  }
  for (auto& v : a) {
    if (v >= two_p) v -= two_p;
    if (v >= p) v -= p;
  }
}

void NttTables::inverse_bit_reversed(std::span<std::uint64_t> a) const {
  if (a.size() != n_) throw DimensionError("NTT input has wrong length");
  const std::uint64_t p = modulus_.value();
  const std::uint64_t two_p = 2 * p;
  // Gentleman-Sande; values stay in [0, 2p).
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      const ShoupConstant& w = psi_inv_rev_[h + i];
      std::uint64_t* x = a.data() + 2 * i * t;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t u = x[j];
        const std::uint64_t v = y[j];
        std::uint64_t s = u + v;
        if (s >= two_p) s -= two_p;
        x[j] = s;
        y[j] = mul_lazy(w, u - v + two_p, p);
      }
    }
    t <<= 1;
  }
  for (auto& v : a) {
    v = mul_lazy(n_inv_, v, p);
    if (v >= p) v -= p;
  }
}

void NttTables::forward(std::span<std::uint64_t> a) const {
  forward_bit_reversed(a);
  permute(a);
}

void NttTables::inverse(std::span<std::uint64_t> a) const {
  if (a.size() != n_) throw DimensionError("NTT input has wrong length");
  permute(a);
  inverse_bit_reversed(a);
}

std::vector<std::uint64_t> negacyclic_multiply_schoolbook(std::span<const std::uint64_t> a,
                                                          std::span<const std::uint64_t> b,
                                                          const Modulus& modulus) {
  if (a.size() != b.size()) throw DimensionError("schoolbook operands differ in length");
  const std::size_t n = a.size();
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t prod = modulus.mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = modulus.add(out[k], prod);
      } else {
        out[k - n] = modulus.sub(out[k - n], prod);
      }
    }
  }
  return out;
}

}  // namespace hepack::math
