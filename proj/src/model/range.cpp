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

#include "hepack/model/range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "hepack/common/error.hpp"

namespace hepack::model {

namespace {

constexpr Bound kMax = std::numeric_limits<Bound>::max();

Bound sat_add(Bound a, Bound b) { return a > kMax - b ? kMax : a + b; }

Bound sat_mul(Bound a, Bound b) {
  if (a == 0 || b == 0) return 0;
  return a > kMax / b ? kMax : a * b;
}

Bound magnitude(std::int64_t v) {
  return v < 0 ? static_cast<Bound>(-(v + 1)) + 1 : static_cast<Bound>(v);
}

Bound conv_bound(const cnn::ConvSpec& c, Bound in) {
  Bound worst = 0;
  const std::size_t per_filter = c.input.channels * c.kernel_h * c.kernel_w;
  for (std::size_t f = 0; f < c.filters; ++f) {
    Bound sum = 0;
    for (std::size_t k = 0; k < per_filter; ++k) sum = sat_add(sum, magnitude(c.weights[f * per_filter + k]));
    worst = std::max(worst, sat_add(sat_mul(sum, in), magnitude(c.biases[f])));
  }
  return worst;
}

Bound fc_bound(const cnn::FcSpec& f, Bound in) {
  Bound worst = 0;
  for (std::size_t o = 0; o < f.outputs; ++o) {
    Bound sum = 0;
    for (std::size_t i = 0; i < f.inputs; ++i) sum = sat_add(sum, magnitude(f.weight(o, i)));
    worst = std::max(worst, sat_add(sat_mul(sum, in), magnitude(f.biases[o])));
  }
  return worst;
}

}  // namespace

std::string to_string(Bound b) {
  if (b == 0) return "0";
  if (b == kMax) return ">=2^128";
  std::string s;
  while (b > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(b % 10)));
    b /= 10;
  }
  return {s.rbegin(), s.rend()};
}

double log2_bound(Bound b) {
  if (b == 0) return -std::numeric_limits<double>::infinity();
  return std::log2(static_cast<long double>(b));
}

RangeCertificate range_check(const IntegerModel& net, int input_bits, std::uint64_t plain_modulus) {
  if (input_bits < 0 || input_bits > 62) throw ParameterError("input_bits must be in [0, 62]");
  return range_check_bound(net, (Bound{1} << input_bits) - 1, plain_modulus);
}

RangeCertificate range_check_bound(const IntegerModel& net, Bound input_bound, std::uint64_t plain_modulus) {
  net.validate();
  if (plain_modulus < 3) throw ParameterError("plain modulus must be at least 3");
  RangeCertificate cert;
  cert.plain_modulus = plain_modulus;
  cert.limit = (plain_modulus - 1) / 2;
  cert.input_bound = input_bound;
  Bound cur = input_bound;
  for (const auto& layer : net.layers) {
    if (const auto* c = std::get_if<cnn::ConvSpec>(&layer)) {
      cur = conv_bound(*c, cur);
    } else if (const auto* f = std::get_if<cnn::FcSpec>(&layer)) {
      cur = fc_bound(*f, cur);
    } else {
      cur = sat_mul(cur, cur);
    }
    cert.layers.push_back({cnn::layer_kind(layer), cur, cur <= cert.limit});
  }
  cert.pass = cert.final_bound() <= cert.limit;
  return cert;
}

std::string describe(const RangeCertificate& cert) {
  std::ostringstream os;
  os << "range certificate (t = " << cert.plain_modulus << ", limit = " << to_string(cert.limit) << ")\n";
  os << "  input  bound " << to_string(cert.input_bound) << "\n";
  for (std::size_t i = 0; i < cert.layers.size(); ++i) {
    const auto& l = cert.layers[i];
    os << "  " << i << ' ' << l.kind << " bound " << to_string(l.bound) << " (2^" << log2_bound(l.bound)
       << (l.within ? ")\n" : ", above limit)\n");
  }
  os << "  verdict " << (cert.pass ? "pass" : "fail") << "\n";
  return os.str();
}

}  // namespace hepack::model
