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

#include "hepack/model/float_model.hpp"

#include <cmath>
#include <variant>

#include "hepack/common/error.hpp"

namespace hepack::model {

namespace {

std::size_t weight_count(const cnn::LayerSpec& l) {
  if (const auto* c = std::get_if<cnn::ConvSpec>(&l)) return c->weights.size();
  if (const auto* f = std::get_if<cnn::FcSpec>(&l)) return f->weights.size();
  return 0;
}

std::size_t bias_count(const cnn::LayerSpec& l) {
  if (const auto* c = std::get_if<cnn::ConvSpec>(&l)) return c->biases.size();
  if (const auto* f = std::get_if<cnn::FcSpec>(&l)) return f->biases.size();
  return 0;
}

}  // namespace

void FloatModel::validate() const {
  architecture.validate();
  const auto& layers = architecture.layers;
  if (weights.size() != layers.size() || biases.size() != layers.size()) {
    throw ShapeError("float model needs one weight and bias array per layer");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (weights[i].size() != weight_count(layers[i]) || biases[i].size() != bias_count(layers[i])) {
      throw ShapeError("float model layer " + std::to_string(i) + " has the wrong number of parameters");
    }
  }
}

FloatModel float_model_like(const cnn::NetworkSpec& architecture) {
  FloatModel m;
  m.architecture = architecture;
  for (const auto& l : architecture.layers) {
    m.weights.emplace_back(weight_count(l), 0.0);
    m.biases.emplace_back(bias_count(l), 0.0);
  }
  m.validate();
  return m;
}

std::int64_t quantize_value(double v, int bits) {
  const double scaled = std::ldexp(v, bits);
  if (!std::isfinite(scaled) || std::fabs(scaled) >= 0x1p62) {
    throw OverflowError("quantized value exceeds 2^62");
  }
  return static_cast<std::int64_t>(std::round(scaled));
}

IntegerModel quantize(const FloatModel& m, const std::vector<int>& weight_scale_bits, int input_scale_bits) {
  m.validate();
  if (weight_scale_bits.size() != m.architecture.layers.size()) {
    throw ParameterError("need one weight scale exponent per layer");
  }
  IntegerModel net = m.architecture;
  net.input_scale_bits = input_scale_bits;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    if (!cnn::is_linear(net.layers[i])) continue;
    const int bits = weight_scale_bits[i];
    if (bits < 0 || bits > 8) throw ParameterError("weight scale exponent must be in [0, 8]");
    std::visit([&](auto& l) {
      if constexpr (!std::is_same_v<std::decay_t<decltype(l)>, cnn::SquareSpec>) l.scale_bits = bits;
    }, net.layers[i]);
  }
  const std::vector<int> ledger = net.scale_ledger();
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    std::visit([&](auto& l) {
      if constexpr (!std::is_same_v<std::decay_t<decltype(l)>, cnn::SquareSpec>) {
        for (std::size_t k = 0; k < l.weights.size(); ++k) l.weights[k] = quantize_value(m.weights[i][k], l.scale_bits);
        for (std::size_t k = 0; k < l.biases.size(); ++k) l.biases[k] = quantize_value(m.biases[i][k], ledger[i]);
      }
    }, net.layers[i]);
  }
  return net;
}

IntegerModel quantize(const FloatModel& m, int weight_scale_bits, int input_scale_bits) {
  return quantize(m, std::vector<int>(m.architecture.layers.size(), weight_scale_bits), input_scale_bits);
}

std::vector<double> plaintext_infer_float(const FloatModel& m, const std::vector<double>& input) {
  m.validate();
  if (input.size() != m.architecture.input.size()) {
    throw DimensionError("input has " + std::to_string(input.size()) + " values but the model expects " +
                         std::to_string(m.architecture.input.size()));
  }
  std::vector<double> x = input;
  for (std::size_t li = 0; li < m.architecture.layers.size(); ++li) {
    const auto& layer = m.architecture.layers[li];
    const auto& w = m.weights[li];
    const auto& b = m.biases[li];
    if (const auto* c = std::get_if<cnn::ConvSpec>(&layer)) {
      const Shape3 out = c->output();
      std::vector<double> y(out.size());
      for (std::size_t f = 0; f < out.channels; ++f) {
        for (std::size_t oy = 0; oy < out.height; ++oy) {
          for (std::size_t ox = 0; ox < out.width; ++ox) {
            double acc = b[f];
            for (std::size_t ch = 0; ch < c->input.channels; ++ch) {
              for (std::size_t i = 0; i < c->kernel_h; ++i) {
                for (std::size_t j = 0; j < c->kernel_w; ++j) {
                  acc += w[c->weight_index(f, ch, i, j)] *
                         x[c->input.index(ch, oy * c->stride_h + i, ox * c->stride_w + j)];
                }
              }
            }
            y[out.index(f, oy, ox)] = acc;
          }
        }
      }
      x = std::move(y);
    } else if (const auto* fc = std::get_if<cnn::FcSpec>(&layer)) {
      std::vector<double> y(fc->outputs);
      for (std::size_t o = 0; o < fc->outputs; ++o) {
        double acc = b[o];
        for (std::size_t i = 0; i < fc->inputs; ++i) acc += w[o * fc->inputs + i] * x[i];
        y[o] = acc;
      }
      x = std::move(y);
    } else {
      for (auto& v : x) v *= v;
    }
  }
  return x;
}

Tensor3 quantize_image(Shape3 shape, const std::vector<double>& pixels, int input_bits) {
  if (pixels.size() != shape.size()) throw DimensionError("pixel count does not match shape");
  if (input_bits < 1 || input_bits > 30) throw ParameterError("input_bits must be in [1, 30]");
  const double top = std::ldexp(1.0, input_bits) - 1;
  Tensor3 t(shape);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double p = pixels[i];
    if (!(p >= 0.0 && p <= 1.0)) throw DimensionError("normalized pixels must lie in [0, 1]");
    t.values[i] = static_cast<std::int64_t>(std::round(p * top));
  }
  return t;
}

}  // namespace hepack::model
