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

#include "hepack/cnn/compile.hpp"

#include "hepack/common/error.hpp"

namespace hepack::cnn {

ConvRows::ConvRows(const ConvSpec& spec) : spec_(spec), out_(spec.output()) {
  if (spec.weights.size() != spec.filters * spec.input.channels * spec.kernel_h * spec.kernel_w ||
      spec.biases.size() != spec.filters) {
    throw ShapeError("conv: weight or bias count does not match the declared shape");
  }
}

hemat::WeightRow ConvRows::row(std::size_t i) const {
  if (i >= out_.size()) throw DimensionError("conv row index out of range");
  const std::size_t plane = out_.height * out_.width;
  const std::size_t f = i / plane;
  const std::size_t oy = (i % plane) / out_.width;
  const std::size_t ox = i % out_.width;
  hemat::WeightRow row;
  row.bias = spec_.biases[f];
  row.output_index = i;
  const Shape3& in = spec_.input;
  for (std::size_t c = 0; c < in.channels; ++c) {
    for (std::size_t ki = 0; ki < spec_.kernel_h; ++ki) {
      for (std::size_t kj = 0; kj < spec_.kernel_w; ++kj) {
        const std::int64_t w = spec_.weight(f, c, ki, kj);
        if (w == 0) continue;
        row.index.push_back(
            static_cast<std::uint32_t>(in.index(c, oy * spec_.stride_h + ki, ox * spec_.stride_w + kj)));
        row.weight.push_back(w);
      }
    }
  }
  return row;
}

FcRows::FcRows(const FcSpec& spec) : spec_(spec) {
  if (spec.weights.size() != spec.inputs * spec.outputs || spec.biases.size() != spec.outputs) {
    throw ShapeError("fc: weight or bias count does not match the declared shape");
  }
}

hemat::WeightRow FcRows::row(std::size_t i) const {
  if (i >= spec_.outputs) throw DimensionError("fc row index out of range");
  hemat::WeightRow row;
  row.bias = spec_.biases[i];
  row.output_index = i;
  for (std::size_t k = 0; k < spec_.inputs; ++k) {
    const std::int64_t w = spec_.weight(i, k);
    if (w == 0) continue;
    row.index.push_back(static_cast<std::uint32_t>(k));
    row.weight.push_back(w);
  }
  return row;
}

namespace {

std::vector<hemat::WeightRow> materialize(const hemat::RowSource& src) {
  std::vector<hemat::WeightRow> rows;
  rows.reserve(src.row_count());
  for (std::size_t i = 0; i < src.row_count(); ++i) rows.push_back(src.row(i));
  return rows;
}

}  // namespace

std::vector<hemat::WeightRow> compile_conv(const ConvSpec& spec) { return materialize(ConvRows(spec)); }

std::vector<hemat::WeightRow> compile_fc(const FcSpec& spec) { return materialize(FcRows(spec)); }

std::unique_ptr<hemat::RowSource> layer_rows(const LayerSpec& layer) {
  if (const auto* c = std::get_if<ConvSpec>(&layer)) return std::make_unique<ConvRows>(*c);
  if (const auto* f = std::get_if<FcSpec>(&layer)) return std::make_unique<FcRows>(*f);
  return nullptr;
}

std::vector<bool> zero_segments(const hemat::WeightRow& row, std::size_t length, std::size_t s) {
  if (s == 0) throw DimensionError("segment size must be positive");
  std::vector<bool> flags(hemat::packed_count(length, s), true);
  for (std::size_t k = 0; k < row.index.size(); ++k) {
    if (row.index[k] >= length) throw DimensionError("weight index beyond row length");
    if (row.weight[k] != 0) flags[row.index[k] / s] = false;
  }
  return flags;
}

}  // namespace hepack::cnn
