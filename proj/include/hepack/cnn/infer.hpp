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

#ifndef HEPACK_CNN_INFER_HPP_
#define HEPACK_CNN_INFER_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hepack/cnn/network.hpp"
#include "hepack/common/tensor.hpp"
#include "hepack/hemat/matvec.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::cnn {

struct InferOptions {
  std::size_t threads = 1;
  bool skip_zero_segments = true;
  std::uint64_t memory_cap_bytes = 0;  // 0 disables the guard
};

// Flattens channel by channel into ceil(C*H*W / s) ciphertexts.
hemat::PackedVector pack_image(slot::Backend& backend, const Tensor3& image, std::size_t slots_used,
                               int scale_bits = 0);

// One ciphertext per pixel, the value broadcast to every slot.
std::vector<slot::Ciphertext> pack_image_interleaved(slot::Backend& backend, const Tensor3& image);

// Encrypted W x + b for one linear layer; consumes two levels.
hemat::PackedVector layer_eval(slot::Backend& backend, const hemat::RowSource& rows,
                               const hemat::PackedVector& x, const InferOptions& options = {});

// Slot-wise square; consumes one level and doubles the scale exponent.
hemat::PackedVector square_activation(slot::Backend& backend, hemat::PackedVector x);

// Runs every layer on a compactly packed image. Throws BudgetExhausted
// before any work if the network needs more levels than remain, and
// CapacityRefusal if the estimated footprint exceeds a configured cap.
hemat::PackedVector infer(slot::Backend& backend, const NetworkSpec& net, const hemat::PackedVector& image,
                          const InferOptions& options = {});

// Per-pixel baseline: every activation is its own ciphertext.
std::vector<slot::Ciphertext> interleaved_infer(slot::Backend& backend, const NetworkSpec& net,
                                                const std::vector<slot::Ciphertext>& pixels,
                                                const InferOptions& options = {});

std::vector<std::int64_t> decrypt_vector(slot::Backend& backend, const hemat::PackedVector& v);
std::vector<std::int64_t> decrypt_interleaved(slot::Backend& backend, const std::vector<slot::Ciphertext>& v);

// Index of the first largest entry.
std::size_t argmax(const std::vector<std::int64_t>& values);

}  // namespace hepack::cnn

#endif  // HEPACK_CNN_INFER_HPP_
