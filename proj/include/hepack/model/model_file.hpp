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

#ifndef HEPACK_MODEL_MODEL_FILE_HPP_
#define HEPACK_MODEL_MODEL_FILE_HPP_

#include <filesystem>
#include <string>

#include "hepack/model/oracle.hpp"

namespace hepack::model {

// Model files are JSON:
//
//   {"format": "hepack-model", "version": 1,
//    "input": {"channels": C, "height": H, "width": W}, "input_scale_bits": b,
//    "layers": [
//      {"type": "conv", "filters": F, "kernel": [kh, kw], "stride": [sh, sw],
//       "scale_bits": s, "weights": W, "biases": B},
//      {"type": "square"},
//      {"type": "fc", "outputs": N, "scale_bits": s, "weights": W, "biases": B}]}
//
// A weight array W is one of
//   [w0, w1, ...]                                   dense, base 10
//   {"length": n, "nonzero": [[index, value], ...]} sparse
//   {"sidecar": {"offset": o, "count": n}}          int64 little-endian
//                                                   values in <file>.weights
// Conv weights are ordered [filter][channel][i][j]; fc weights are
// row-major, one row per output.
struct SaveOptions {
  bool use_sidecar = false;
};

void save_model(const std::filesystem::path& path, const IntegerModel& net, const SaveOptions& options = {});

// Throws FormatError on malformed files and ShapeError when layers do not
// chain.
IntegerModel load_model(const std::filesystem::path& path);

std::string model_to_json(const IntegerModel& net);
IntegerModel model_from_json(const std::string& text);

}  // namespace hepack::model

#endif  // HEPACK_MODEL_MODEL_FILE_HPP_
