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

#ifndef HEPACK_CNN_NETWORK_HPP_
#define HEPACK_CNN_NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hepack/common/shape.hpp"

namespace hepack::cnn {

// Valid (unpadded) convolution.
struct ConvSpec {
  std::size_t filters = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  Shape3 input;
  std::vector<std::int64_t> weights;  // [filter][channel][i][j]
  std::vector<std::int64_t> biases;   // one per filter
  int scale_bits = 0;                 // weights carry a factor 2^scale_bits

  // OH = floor((H - kh) / sh) + 1, likewise OW. Throws ShapeError if the
  // kernel does not fit.
  Shape3 output() const;
  std::size_t weight_index(std::size_t f, std::size_t c, std::size_t i, std::size_t j) const {
    return ((f * input.channels + c) * kernel_h + i) * kernel_w + j;
  }
  std::int64_t weight(std::size_t f, std::size_t c, std::size_t i, std::size_t j) const {
    return weights[weight_index(f, c, i, j)];
  }
};

struct FcSpec {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<std::int64_t> weights;  // outputs x inputs, row-major
  std::vector<std::int64_t> biases;
  int scale_bits = 0;

  std::int64_t weight(std::size_t o, std::size_t i) const { return weights[o * inputs + i]; }
};

struct SquareSpec {};

using LayerSpec = std::variant<ConvSpec, FcSpec, SquareSpec>;

std::string layer_kind(const LayerSpec& layer);
bool is_linear(const LayerSpec& layer);

struct NetworkSpec {
  Shape3 input;
  int input_scale_bits = 0;
  std::vector<LayerSpec> layers;

  // Throws ShapeError when adjacent layers do not chain or a weight or
  // bias array has the wrong size.
  void validate() const;

  // Levels under the compact cost model: 2 per linear layer, 1 per square.
  std::size_t depth_cost() const;
  // Levels for the per-pixel baseline: 1 per linear layer, 1 per square.
  std::size_t interleaved_depth_cost() const;

  // lengths()[0] is the input length, lengths()[i + 1] the output length of
  // layer i.
  std::vector<std::size_t> lengths() const;
  std::size_t output_length() const { return lengths().back(); }

  // Shape of each layer's output; a fully connected layer yields
  // (outputs, 1, 1).
  std::vector<Shape3> shapes() const;

  // scale_ledger()[i] is the scale exponent after layer i. Linear layers
  // add their weight exponent, squares double it.
  std::vector<int> scale_ledger() const;
};

// Conv(F1, 5x5, stride 2), square, conv(F2, 5x5, stride 2), square, fully
// connected; zero weights. With the defaults this is the 28x28 digit net.
NetworkSpec table1_network(Shape3 input, std::size_t classes = 10, std::size_t conv1_filters = 25,
                           std::size_t conv2_filters = 50);

}  // namespace hepack::cnn

#endif  // HEPACK_CNN_NETWORK_HPP_
