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

#ifndef HEPACK_MODEL_ORACLE_HPP_
#define HEPACK_MODEL_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "hepack/cnn/network.hpp"
#include "hepack/common/tensor.hpp"

namespace hepack::model {

// Integer networks are NetworkSpecs whose scale exponents record the
// fixed-point factors.
using IntegerModel = cnn::NetworkSpec;

// trace[i] holds the outputs of layer i.
using Trace = std::vector<std::vector<std::int64_t>>;

// Exact integer forward pass (no modulus). Throws OverflowError if a value
// leaves the 64-bit range and DimensionError if the image does not match
// the network input.
std::vector<std::int64_t> plaintext_infer_int(const IntegerModel& net, const Tensor3& image,
                                              Trace* trace = nullptr);

// Centered residue of v modulo t, in [-(t-1)/2, (t-1)/2].
std::int64_t centered_mod(std::int64_t v, std::uint64_t t);

}  // namespace hepack::model

#endif  // HEPACK_MODEL_ORACLE_HPP_
