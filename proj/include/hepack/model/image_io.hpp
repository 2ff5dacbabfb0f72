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

#ifndef HEPACK_MODEL_IMAGE_IO_HPP_
#define HEPACK_MODEL_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>

#include "hepack/common/tensor.hpp"

namespace hepack::model {

struct RawImage {
  Tensor3 pixels;  // channel-major
  std::int64_t max_value = 255;
};

// Reads PGM (P2/P5), PPM (P3/P6) or a raw tensor file (magic "HPIM").
// Throws IoError if the file cannot be read and FormatError if it cannot
// be parsed.
RawImage read_image(const std::filesystem::path& path);

// Pixel v with maximum M becomes round(v * (2^input_bits - 1) / M). Raw
// tensor files hold quantized values and are returned unchanged.
Tensor3 load_quantized_image(const std::filesystem::path& path, int input_bits);

// Binary PGM for one channel, binary PPM for three. Values must lie in
// [0, max_value] with max_value < 65536.
void write_pnm(const std::filesystem::path& path, const Tensor3& image, std::int64_t max_value = 255);

// Raw tensor file: "HPIM", version, C, H, W, int64 values.
void write_tensor(const std::filesystem::path& path, const Tensor3& t);

}  // namespace hepack::model

#endif  // HEPACK_MODEL_IMAGE_IO_HPP_
