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

#ifndef HEPACK_CLI_CLI_HPP_
#define HEPACK_CLI_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hepack::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kRefused = 3,  // capacity, depth or overflow refusal
  kIo = 4,
};

struct RunConfig {
  std::string profile = "desk";
  std::filesystem::path profiles_file;  // empty: built-in profiles
  std::string backend = "sim";
  std::string packing = "compact";
  std::size_t slots_used = 0;  // 0: the profile's slot count
  std::size_t threads = 1;
  std::uint64_t memory_cap_bytes = 0;  // 0: no cap
  std::uint64_t seed = 1;
  std::filesystem::path model;
  std::filesystem::path image;
  std::filesystem::path encrypted;
  std::filesystem::path keys;
  std::filesystem::path out;
};

// Accepts a plain byte count or a number with a K, M, G or T suffix
// (powers of 1000) or Ki, Mi, Gi, Ti (powers of 1024).
std::uint64_t parse_bytes(std::string_view text);

// Runs one command line without the program name. Reports go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hepack::cli

#endif  // HEPACK_CLI_CLI_HPP_
