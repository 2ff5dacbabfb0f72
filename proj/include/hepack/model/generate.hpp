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

#ifndef HEPACK_MODEL_GENERATE_HPP_
#define HEPACK_MODEL_GENERATE_HPP_

#include <cstdint>
#include <random>

#include "hepack/model/float_model.hpp"
#include "hepack/model/oracle.hpp"

namespace hepack::model {

struct Architecture {
  std::size_t classes = 10;
  std::size_t conv1_filters = 25;
  std::size_t conv2_filters = 50;
};

// Table-1 shaped network with each weight nonzero with probability
// `density`, magnitudes uniform in [1, 2^weight_bits - 1] and random signs.
// Biases are uniform in [-(2^bias_bits - 1), 2^bias_bits - 1].
struct RandomNetworkOptions {
  Architecture architecture;
  int weight_bits = 4;
  int bias_bits = 2;
  double density = 1.0;
  int input_bits = 8;  // recorded as the input scale exponent
};

IntegerModel random_network(std::mt19937_64& rng, Shape3 input, const RandomNetworkOptions& options = {});

// Table-1 shaped network that range_check certifies for inputs of
// `input_bits` bits under plain modulus t. Weight magnitude and the number
// of nonzero weights per filter or row shrink until the worst case fits,
// then positions and values are drawn at random. Throws ParameterError if
// even one unit weight per row cannot be certified.
struct CertifiedOptions {
  Architecture architecture;
  int input_bits = 1;
  std::uint64_t plain_modulus = 0;
  int weight_bits = 4;
};

IntegerModel random_certified_network(std::mt19937_64& rng, Shape3 input, const CertifiedOptions& options);

// Pixels uniform in [0, 2^input_bits - 1].
Tensor3 random_image(std::mt19937_64& rng, Shape3 shape, int input_bits);

// Weights and biases uniform in [-amplitude, amplitude].
FloatModel random_float_model(std::mt19937_64& rng, const cnn::NetworkSpec& architecture, double amplitude = 0.5);

}  // namespace hepack::model

#endif  // HEPACK_MODEL_GENERATE_HPP_
