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

#ifndef HEPACK_MODEL_FLOAT_MODEL_HPP_
#define HEPACK_MODEL_FLOAT_MODEL_HPP_

#include <vector>

#include "hepack/model/oracle.hpp"

namespace hepack::model {

// Real-valued network. The architecture fixes the layer geometry; its
// integer weight arrays are placeholders of the right size.
struct FloatModel {
  cnn::NetworkSpec architecture;
  std::vector<std::vector<double>> weights;  // per layer; empty for squares
  std::vector<std::vector<double>> biases;

  void validate() const;
};

// Zero-valued model with the given architecture.
FloatModel float_model_like(const cnn::NetworkSpec& architecture);

// Round half away from zero of v * 2^bits; throws OverflowError beyond
// 2^62.
std::int64_t quantize_value(double v, int bits);

// Fixed-point quantization. Weights of linear layer i are scaled by
// 2^weight_scale_bits[i] (one entry per layer; squares ignore theirs),
// biases by the accumulated scale of their layer's output. Throws
// ParameterError unless every weight exponent is in [0, 8].
IntegerModel quantize(const FloatModel& m, const std::vector<int>& weight_scale_bits, int input_scale_bits);
IntegerModel quantize(const FloatModel& m, int weight_scale_bits, int input_scale_bits);

// Floating-point forward pass.
std::vector<double> plaintext_infer_float(const FloatModel& m, const std::vector<double>& input);

// Pixel p in [0, 1] becomes round(p * (2^input_bits - 1)).
Tensor3 quantize_image(Shape3 shape, const std::vector<double>& pixels, int input_bits);

}  // namespace hepack::model

#endif  // HEPACK_MODEL_FLOAT_MODEL_HPP_
