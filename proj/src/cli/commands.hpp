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

#ifndef HEPACK_SRC_CLI_COMMANDS_HPP_
#define HEPACK_SRC_CLI_COMMANDS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "hepack/cli/cli.hpp"
#include "hepack/slot/backend.hpp"

namespace hepack::cli {

struct EncryptFlags {
  std::optional<int> bits;
};

struct InferFlags {
  bool skip_range_check = false;
};

struct CompareFlags {
  std::string shape;
  bool execute = false;
};

struct MatmulFlags {
  std::size_t rows = 0;
  std::size_t inner = 0;
  std::size_t cols = 0;
  std::string layout_a = "RCP";
  std::string layout_b = "CCP";
  std::int64_t entry_bound = 7;
};

slot::BackendParams resolve_profile(const RunConfig& cfg);

struct Session {
  std::unique_ptr<slot::Backend> backend;
  bool can_decrypt = true;
};
Session open_session(const RunConfig& cfg);

int cmd_keygen(const RunConfig& cfg, std::ostream& out);
int cmd_encrypt_image(const RunConfig& cfg, const EncryptFlags& flags, std::ostream& out);
int cmd_infer(const RunConfig& cfg, const InferFlags& flags, std::ostream& out);
int cmd_compare(const RunConfig& cfg, const CompareFlags& flags, std::ostream& out);
int cmd_matmul(const RunConfig& cfg, const MatmulFlags& flags, std::ostream& out);

}  // namespace hepack::cli

#endif  // HEPACK_SRC_CLI_COMMANDS_HPP_
