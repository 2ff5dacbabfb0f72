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

#include "hepack/model/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>

#include "hepack/common/error.hpp"
#include "hepack/model/range.hpp"

namespace hepack::model {

namespace {

std::int64_t signed_magnitude(std::mt19937_64& rng, std::int64_t max_magnitude) {
  std::uniform_int_distribution<std::int64_t> mag(1, max_magnitude);
  const std::int64_t v = mag(rng);
  return (rng() & 1) ? v : -v;
}

std::int64_t symmetric(std::mt19937_64& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  return d(rng);
}

// Fills `count` random positions of each of `rows` rows of width `width`.
void fill_sparse(std::mt19937_64& rng, std::vector<std::int64_t>& w, std::size_t rows, std::size_t width,
                 std::size_t count, std::int64_t magnitude) {
  std::vector<std::size_t> pos(width);
  for (std::size_t r = 0; r < rows; ++r) {
    std::iota(pos.begin(), pos.end(), 0);
    for (std::size_t k = 0; k < count; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, width - 1);
      std::swap(pos[k], pos[pick(rng)]);
      w[r * width + pos[k]] = signed_magnitude(rng, magnitude);
    }
  }
}

struct Plan {
  std::size_t a, b, c;  // nonzeros per conv1 filter, conv2 filter, fc row
  std::int64_t m;       // weight and bias magnitude
};

// Worst-case final bound of a network drawn with `plan`.
Bound worst_case(const Plan& p, Bound input) {
  auto lin = [&](std::size_t n, Bound x) {
    const Bound mm = static_cast<Bound>(p.m);
    const Bound prod = x == 0 ? 0 : (mm * n > ~Bound{0} / x ? ~Bound{0} : mm * n * x);
    return prod > ~Bound{0} - mm ? ~Bound{0} : prod + mm;
  };
  auto sq = [](Bound x) { return x > (~Bound{0}) / (x == 0 ? 1 : x) ? ~Bound{0} : x * x; };
  return lin(p.c, sq(lin(p.b, sq(lin(p.a, input)))));
}

}  // namespace

IntegerModel random_network(std::mt19937_64& rng, Shape3 input, const RandomNetworkOptions& o) {
  if (o.weight_bits < 1 || o.weight_bits > 16) throw ParameterError("weight_bits must be in [1, 16]");
  const Architecture& a = o.architecture;
  IntegerModel net = cnn::table1_network(input, a.classes, a.conv1_filters, a.conv2_filters);
  net.input_scale_bits = o.input_bits;
  const std::int64_t wmax = (std::int64_t{1} << o.weight_bits) - 1;
  const std::int64_t bmax = o.bias_bits > 0 ? (std::int64_t{1} << o.bias_bits) - 1 : 0;
  std::bernoulli_distribution keep(std::clamp(o.density, 0.0, 1.0));
  for (auto& layer : net.layers) {
    std::visit([&](auto& l) {
      if constexpr (!std::is_same_v<std::decay_t<decltype(l)>, cnn::SquareSpec>) {
        l.scale_bits = o.weight_bits;
        for (auto& w : l.weights) w = keep(rng) ? signed_magnitude(rng, wmax) : 0;
        for (auto& b : l.biases) b = symmetric(rng, bmax);
      }
    }, layer);
  }
  return net;
}

IntegerModel random_certified_network(std::mt19937_64& rng, Shape3 input, const CertifiedOptions& o) {
  if (o.plain_modulus < 3) throw ParameterError("plain modulus must be at least 3");
  if (o.weight_bits < 1 || o.weight_bits > 16) throw ParameterError("weight_bits must be in [1, 16]");
  const Architecture& arch = o.architecture;
  IntegerModel net = cnn::table1_network(input, arch.classes, arch.conv1_filters, arch.conv2_filters);
  net.input_scale_bits = o.input_bits;
  auto& c1 = std::get<cnn::ConvSpec>(net.layers[0]);
  auto& c2 = std::get<cnn::ConvSpec>(net.layers[2]);
  auto& fc = std::get<cnn::FcSpec>(net.layers[4]);
  const std::size_t w1 = c1.input.channels * 25, w2 = c2.input.channels * 25, w3 = fc.inputs;

  const Bound in = (Bound{1} << o.input_bits) - 1;
  const Bound limit = (o.plain_modulus - 1) / 2;
  Plan p{w1, w2, w3, (std::int64_t{1} << o.weight_bits) - 1};
  while (worst_case(p, in) > limit) {
    if (p.m > 1) {
      p.m = (p.m + 1) / 2;
      continue;
    }
    // conv1 enters the final bound to the fourth power, conv2 squared.
    const double la = 4 * std::log2(static_cast<double>(p.a));
    const double lb = 2 * std::log2(static_cast<double>(p.b));
    const double lc = std::log2(static_cast<double>(p.c));
    if (p.a == 1 && p.b == 1 && p.c == 1) {
      throw ParameterError("no Table-1 network fits plain modulus " + std::to_string(o.plain_modulus) +
                           " with " + std::to_string(o.input_bits) + "-bit inputs");
    }
    if (la >= lb && la >= lc && p.a > 1) {
      p.a /= 2;
    } else if (lb >= lc && p.b > 1) {
      p.b /= 2;
    } else if (p.c > 1) {
      p.c /= 2;
    } else if (p.b > 1) {
      p.b /= 2;
    } else {
      p.a /= 2;
    }
  }

  for (auto* l : {&c1, &c2}) l->scale_bits = o.weight_bits;
  fc.scale_bits = o.weight_bits;
  fill_sparse(rng, c1.weights, c1.filters, w1, p.a, p.m);
  fill_sparse(rng, c2.weights, c2.filters, w2, p.b, p.m);
  fill_sparse(rng, fc.weights, fc.outputs, w3, p.c, p.m);
  for (auto* bias : {&c1.biases, &c2.biases, &fc.biases}) {
    for (auto& b : *bias) b = symmetric(rng, p.m);
  }
  if (!range_check(net, o.input_bits, o.plain_modulus).pass) {
    throw Error("internal: generated network failed certification");
  }
  return net;
}

Tensor3 random_image(std::mt19937_64& rng, Shape3 shape, int input_bits) {
  if (input_bits < 1 || input_bits > 30) throw ParameterError("input_bits must be in [1, 30]");
  std::uniform_int_distribution<std::int64_t> d(0, (std::int64_t{1} << input_bits) - 1);
  Tensor3 t(shape);
  for (auto& v : t.values) v = d(rng);
  return t;
}

FloatModel random_float_model(std::mt19937_64& rng, const cnn::NetworkSpec& architecture, double amplitude) {
  FloatModel m = float_model_like(architecture);
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  for (auto& layer : m.weights) {
    for (auto& w : layer) w = d(rng);
  }
  for (auto& layer : m.biases) {
    for (auto& b : layer) b = d(rng);
  }
  return m;
}

}  // namespace hepack::model
