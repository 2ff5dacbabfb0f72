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

#ifndef HEPACK_FV_IO_HPP_
#define HEPACK_FV_IO_HPP_

#include <filesystem>
#include <memory>

#include "hepack/common/binary_io.hpp"
#include "hepack/fv/scheme.hpp"

namespace hepack::fv {

void write_poly(ByteWriter& out, const RnsPoly& p);
// Validates the shape against `ctx` and every residue against its modulus.
RnsPoly read_poly(ByteReader& in, const FvContext& ctx);

// Key directory layout: params.json, secret.key, public.key, relin.key,
// galois.key. Each binary file starts with "HPFK", a version, a kind byte
// and the context fingerprint.
void save_keys(const std::filesystem::path& dir, const FvContext& ctx, const KeySet& keys);

struct LoadedKeys {
  std::shared_ptr<const FvContext> context;
  std::shared_ptr<const KeySet> keys;
};
// Without `with_secret` the secret key file is not read and may be absent.
LoadedKeys load_keys(const std::filesystem::path& dir, bool with_secret = true);

FvParams read_params_json(const std::filesystem::path& path);
void write_params_json(const std::filesystem::path& path, const FvParams& params);

}  // namespace hepack::fv

#endif  // HEPACK_FV_IO_HPP_
