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

#include "hepack/cnn/network.hpp"

#include "hepack/common/error.hpp"

namespace hepack::cnn {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Shape3 ConvSpec::output() const {
  if (filters == 0 || kernel_h == 0 || kernel_w == 0 || stride_h == 0 || stride_w == 0) {
    throw ShapeError("conv: filters, kernel and stride must be positive");
  }
  if (input.size() == 0) throw ShapeError("conv: empty input shape");
  if (kernel_h > input.height || kernel_w > input.width) {
    throw ShapeError("conv: kernel " + std::to_string(kernel_h) + "x" + std::to_string(kernel_w) +
                     " larger than input " + input.to_string());
  }
  return {filters, (input.height - kernel_h) / stride_h + 1, (input.width - kernel_w) / stride_w + 1};
}

std::string layer_kind(const LayerSpec& layer) {
  return std::visit(Overloaded{[](const ConvSpec&) { return std::string("conv"); },
                               [](const FcSpec&) { return std::string("fc"); },
                               [](const SquareSpec&) { return std::string("square"); }},
                    layer);
}

bool is_linear(const LayerSpec& layer) { return !std::holds_alternative<SquareSpec>(layer); }

std::vector<Shape3> NetworkSpec::shapes() const {
  if (input.size() == 0) throw ShapeError("network input shape is empty");
  std::vector<Shape3> out;
  Shape3 cur = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = "layer " + std::to_string(i) + " (" + layer_kind(layers[i]) + "): ";
    std::visit(Overloaded{
                   [&](const ConvSpec& c) {
                     if (!(c.input == cur)) {
                       throw ShapeError(where + "expects input " + c.input.to_string() + " but receives " +
                                        cur.to_string());
                     }
                     cur = c.output();
                     const std::size_t w = c.filters * c.input.channels * c.kernel_h * c.kernel_w;
                     if (c.weights.size() != w) throw ShapeError(where + "weight count mismatch");
                     if (c.biases.size() != c.filters) throw ShapeError(where + "bias count mismatch");
                   },
                   [&](const FcSpec& f) {
                     if (f.inputs != cur.size()) {
                       throw ShapeError(where + "expects " + std::to_string(f.inputs) + " inputs but receives " +
                                        std::to_string(cur.size()));
                     }
                     if (f.outputs == 0) throw ShapeError(where + "no outputs");
                     if (f.weights.size() != f.inputs * f.outputs) throw ShapeError(where + "weight count mismatch");
                     if (f.biases.size() != f.outputs) throw ShapeError(where + "bias count mismatch");
                     cur = {f.outputs, 1, 1};
                   },
                   [&](const SquareSpec&) {}},
               layers[i]);
    out.push_back(cur);
  }
  return out;
}

void NetworkSpec::validate() const {
  if (layers.empty()) throw ShapeError("network has no layers");
  shapes();
}

std::size_t NetworkSpec::depth_cost() const {
  std::size_t d = 0;
  for (const auto& l : layers) d += is_linear(l) ? 2 : 1;
  return d;
}

std::size_t NetworkSpec::interleaved_depth_cost() const { return layers.size(); }

std::vector<std::size_t> NetworkSpec::lengths() const {
  std::vector<std::size_t> out{input.size()};
  for (const Shape3& s : shapes()) out.push_back(s.size());
  return out;
}

std::vector<int> NetworkSpec::scale_ledger() const {
  std::vector<int> out;
  int cur = input_scale_bits;
  for (const auto& l : layers) {
    std::visit(Overloaded{[&](const ConvSpec& c) { cur += c.scale_bits; },
                          [&](const FcSpec& f) { cur += f.scale_bits; },
                          [&](const SquareSpec&) { cur *= 2; }},
               l);
    out.push_back(cur);
  }
  return out;
}

NetworkSpec table1_network(Shape3 input, std::size_t classes, std::size_t conv1_filters,
                           std::size_t conv2_filters) {
  NetworkSpec net;
  net.input = input;
  ConvSpec c1;
  c1.filters = conv1_filters;
  c1.kernel_h = c1.kernel_w = 5;
  c1.stride_h = c1.stride_w = 2;
  c1.input = input;
  c1.weights.assign(c1.filters * input.channels * 25, 0);
  c1.biases.assign(c1.filters, 0);
  const Shape3 s1 = c1.output();
  ConvSpec c2;
  c2.filters = conv2_filters;
  c2.kernel_h = c2.kernel_w = 5;
  c2.stride_h = c2.stride_w = 2;
  c2.input = s1;
  c2.weights.assign(c2.filters * s1.channels * 25, 0);
  c2.biases.assign(c2.filters, 0);
  const Shape3 s2 = c2.output();
  FcSpec fc;
  fc.inputs = s2.size();
  fc.outputs = classes;
  fc.weights.assign(fc.inputs * fc.outputs, 0);
  fc.biases.assign(fc.outputs, 0);
  net.layers = {c1, SquareSpec{}, c2, SquareSpec{}, fc};
  return net;
}

}  // namespace hepack::cnn
