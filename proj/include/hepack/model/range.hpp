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

#ifndef HEPACK_MODEL_RANGE_HPP_
#define HEPACK_MODEL_RANGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hepack/model/oracle.hpp"

namespace hepack::model {

// Magnitude bound; arithmetic saturates at the type maximum, which keeps
// every bound sound.
using Bound = unsigned __int128;

std::string to_string(Bound b);
double log2_bound(Bound b);

struct LayerBound {
  std::string kind;
  Bound bound = 0;
  bool within = false;  // bound <= limit
};

struct RangeCertificate {
  std::uint64_t plain_modulus = 0;
  Bound limit = 0;        // floor((t - 1) / 2)
  Bound input_bound = 0;
  std::vector<LayerBound> layers;
  bool pass = false;      // final bound <= limit

  Bound final_bound() const { return layers.empty() ? input_bound : layers.back().bound; }
};

// Interval bounds without sign cancellation: a linear layer maps bound B
// to max over outputs of sum |w| * B + |b|, a square maps B to B^2. Inputs
// are assumed to lie in [0, 2^input_bits - 1].
RangeCertificate range_check(const IntegerModel& net, int input_bits, std::uint64_t plain_modulus);

// Same, for inputs of magnitude at most `input_bound`.
RangeCertificate range_check_bound(const IntegerModel& net, Bound input_bound, std::uint64_t plain_modulus);

std::string describe(const RangeCertificate& cert);

}  // namespace hepack::model

#endif  // HEPACK_MODEL_RANGE_HPP_
