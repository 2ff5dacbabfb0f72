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

#include "hepack/model/oracle.hpp"

#include <limits>
#include <variant>

#include "hepack/common/error.hpp"

namespace hepack::model {

namespace {

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw OverflowError("plaintext inference left the 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> conv(const cnn::ConvSpec& c, const std::vector<std::int64_t>& x) {
  const Shape3 out = c.output();
  const Shape3& in = c.input;
  std::vector<std::int64_t> y(out.size());
  for (std::size_t f = 0; f < out.channels; ++f) {
    for (std::size_t oy = 0; oy < out.height; ++oy) {
      for (std::size_t ox = 0; ox < out.width; ++ox) {
        __int128 acc = c.biases[f];
        for (std::size_t ch = 0; ch < in.channels; ++ch) {
          for (std::size_t i = 0; i < c.kernel_h; ++i) {
            for (std::size_t j = 0; j < c.kernel_w; ++j) {
              acc += static_cast<__int128>(c.weight(f, ch, i, j)) *
                     x[in.index(ch, oy * c.stride_h + i, ox * c.stride_w + j)];
            }
          }
        }
        y[out.index(f, oy, ox)] = narrow(acc);
      }
    }
  }
  return y;
}

std::vector<std::int64_t> fc(const cnn::FcSpec& f, const std::vector<std::int64_t>& x) {
  std::vector<std::int64_t> y(f.outputs);
  for (std::size_t o = 0; o < f.outputs; ++o) {
    __int128 acc = f.biases[o];
    for (std::size_t i = 0; i < f.inputs; ++i) acc += static_cast<__int128>(f.weight(o, i)) * x[i];
    y[o] = narrow(acc);
  }
  return y;
}

}  // namespace

std::vector<std::int64_t> plaintext_infer_int(const IntegerModel& net, const Tensor3& image, Trace* trace) {
  net.validate();
  if (!(image.shape == net.input) || image.values.size() != net.input.size()) {
    throw DimensionError("image shape " + image.shape.to_string() + " does not match network input " +
                         net.input.to_string());
  }
  std::vector<std::int64_t> x = image.values;
  if (trace) trace->clear();
  for (const auto& layer : net.layers) {
    if (const auto* c = std::get_if<cnn::ConvSpec>(&layer)) {
      x = conv(*c, x);
    } else if (const auto* f = std::get_if<cnn::FcSpec>(&layer)) {
      x = fc(*f, x);
    } else {
      for (auto& v : x) v = narrow(static_cast<__int128>(v) * v);
    }
    if (trace) trace->push_back(x);
  }
  return x;
}

std::int64_t centered_mod(std::int64_t v, std::uint64_t t) {
  const auto tt = static_cast<__int128>(t);
  __int128 r = v % tt;
  if (r < 0) r += tt;
  if (r > (tt - 1) / 2) r -= tt;
  return static_cast<std::int64_t>(r);
}

}  // namespace hepack::model
