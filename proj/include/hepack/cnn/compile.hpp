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

#ifndef HEPACK_CNN_COMPILE_HPP_
#define HEPACK_CNN_COMPILE_HPP_

#include <cstddef>
#include <memory>
#include <vector>

#include "hepack/cnn/network.hpp"
#include "hepack/hemat/matvec.hpp"

namespace hepack::cnn {

// Weight rows of a convolution, generated on demand. Row f * OH * OW +
// oy * OW + ox holds w[f][c][i][j] at input position
// c * H * W + (oy * sh + i) * W + ox * sw + j and bias b[f]. Zero weights
// are omitted. The spec must outlive this object.
class ConvRows final : public hemat::RowSource {
 public:
  explicit ConvRows(const ConvSpec& spec);
  std::size_t row_count() const override { return out_.size(); }
  std::size_t input_length() const override { return spec_.input.size(); }
  hemat::WeightRow row(std::size_t i) const override;

 private:
  const ConvSpec& spec_;
  Shape3 out_;
};

// One dense row per output neuron; zero weights are omitted.
class FcRows final : public hemat::RowSource {
 public:
  explicit FcRows(const FcSpec& spec);
  std::size_t row_count() const override { return spec_.outputs; }
  std::size_t input_length() const override { return spec_.inputs; }
  hemat::WeightRow row(std::size_t i) const override;

 private:
  const FcSpec& spec_;
};

std::vector<hemat::WeightRow> compile_conv(const ConvSpec& spec);
std::vector<hemat::WeightRow> compile_fc(const FcSpec& spec);

// Row source of a linear layer; null for a square layer.
std::unique_ptr<hemat::RowSource> layer_rows(const LayerSpec& layer);

// flags[j] is true when segment j (positions [j*s, (j+1)*s)) of the row
// holds no nonzero weight.
std::vector<bool> zero_segments(const hemat::WeightRow& row, std::size_t length, std::size_t s);

}  // namespace hepack::cnn

#endif  // HEPACK_CNN_COMPILE_HPP_
