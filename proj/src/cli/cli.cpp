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

#include "hepack/cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hepack/common/error.hpp"

namespace hepack::cli {

std::uint64_t parse_bytes(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
  if (pos == 0) throw ParameterError("bad byte count '" + std::string(text) + "'");
  const double number = std::stod(std::string(text.substr(0, pos)));
  std::string suffix(text.substr(pos));
  std::transform(suffix.begin(), suffix.end(), suffix.begin(), [](unsigned char c) { return std::toupper(c); });
  if (!suffix.empty() && suffix.back() == 'B') suffix.pop_back();
  double unit = 1;
  if (suffix.empty()) {
  } else if (suffix.size() <= 2 && std::string("KMGT").find(suffix[0]) != std::string::npos &&
             (suffix.size() == 1 || suffix[1] == 'I')) {
    const int power = static_cast<int>(std::string("KMGT").find(suffix[0])) + 1;
    unit = std::pow(suffix.size() == 2 ? 1024.0 : 1000.0, power);
  } else {
    throw ParameterError("bad byte suffix in '" + std::string(text) + "'");
  }
  const double bytes = number * unit;
  if (bytes < 1 || bytes > 1.8e19) throw ParameterError("byte count out of range: " + std::string(text));
  return static_cast<std::uint64_t>(bytes);
}

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& mem_cap) {
  cmd->add_option("--profile", cfg.profile, "Parameter profile: mnist, retina or desk")->capture_default_str();
  cmd->add_option("--profiles-file", cfg.profiles_file, "JSON file overriding profile fields");
  cmd->add_option("--backend", cfg.backend, "sim or fv")
      ->check(CLI::IsMember({"sim", "fv"}))
      ->capture_default_str();
  cmd->add_option("--slots-used", cfg.slots_used, "Slots used per ciphertext (default: all)");
  cmd->add_option("--threads", cfg.threads, "Worker threads (default: $HEPACK_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mem-cap", mem_cap, "Memory cap, e.g. 188G (default: none)");
  cmd->add_option("--seed", cfg.seed, "Seed for keys, noise and random inputs")->capture_default_str();
  cmd->add_option("--out", cfg.out, "Output file or directory");
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const BudgetExhausted*>(&e) || dynamic_cast<const CapacityRefusal*>(&e) ||
      dynamic_cast<const OverflowError*>(&e)) {
    return kRefused;
  }
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const ParamMismatch*>(&e)) {
    return kIo;
  }
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const LayoutError*>(&e)) {
    return kUsage;
  }
  return kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Packed homomorphic matrix products and encrypted CNN inference", "hepack"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("HEPACK_THREADS")) {
    cfg.threads = std::max<std::size_t>(1, std::strtoull(env, nullptr, 10));
  }
  std::string mem_cap;
  EncryptFlags encrypt_flags;
  InferFlags infer_flags;
  CompareFlags compare_flags;
  MatmulFlags matmul_flags;
  std::size_t dim = 4;

  CLI::App* keygen = app.add_subcommand("keygen", "Generate FV keys into a directory");
  add_common(keygen, cfg, mem_cap);

  CLI::App* encrypt = app.add_subcommand("encrypt-image", "Quantize and encrypt an image");
  add_common(encrypt, cfg, mem_cap);
  encrypt->add_option("--image", cfg.image, "PGM, PPM or raw tensor file")->required();
  encrypt->add_option("--packing", cfg.packing, "compact or interleaved")->capture_default_str();
  encrypt->add_option("--keys", cfg.keys, "Key directory (fv backend)");
  encrypt->add_option("--model", cfg.model, "Model whose input scale sets the quantization bits");
  encrypt->add_option("--bits", encrypt_flags.bits, "Input quantization bits");

  CLI::App* infer = app.add_subcommand("infer", "Run encrypted inference on one image");
  add_common(infer, cfg, mem_cap);
  infer->add_option("--model", cfg.model, "Model file")->required();
  infer->add_option("--image", cfg.image, "Plain image, encrypted before inference");
  infer->add_option("--encrypted", cfg.encrypted, "Encrypted image file");
  infer->add_option("--packing", cfg.packing, "compact or interleaved")->capture_default_str();
  infer->add_option("--keys", cfg.keys, "Key directory (fv backend)");
  infer->add_flag("--skip-range-check", infer_flags.skip_range_check, "Run even if logits may wrap modulo t");

  CLI::App* compare = app.add_subcommand("compare", "Compare compact and interleaved packing");
  add_common(compare, cfg, mem_cap);
  compare->add_option("--model", cfg.model, "Model file");
  compare->add_option("--shape", compare_flags.shape, "Random dense network for mnist, rop or idrid input");
  compare->add_option("--image", cfg.image, "Image for --execute (default: random)");
  compare->add_flag("--execute", compare_flags.execute, "Also run both packings on the simulator");

  CLI::App* matmul = app.add_subcommand("matmul", "Multiply two random encrypted matrices");
  add_common(matmul, cfg, mem_cap);
  matmul->add_option("--keys", cfg.keys, "Key directory (fv backend)");
  matmul->add_option("--dim", dim, "Square dimension d")->capture_default_str();
  matmul->add_option("--rows", matmul_flags.rows, "Rows of A");
  matmul->add_option("--inner", matmul_flags.inner, "Columns of A and rows of B");
  matmul->add_option("--cols", matmul_flags.cols, "Columns of B");
  matmul->add_option("--layout-a", matmul_flags.layout_a, "Layout of A")->capture_default_str();
  matmul->add_option("--layout-b", matmul_flags.layout_b, "Layout of B")->capture_default_str();
  matmul->add_option("--entry-bound", matmul_flags.entry_bound, "Entries are drawn from [-b, b]")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!mem_cap.empty()) cfg.memory_cap_bytes = parse_bytes(mem_cap);
    if (*keygen) return cmd_keygen(cfg, out);
    if (*encrypt) return cmd_encrypt_image(cfg, encrypt_flags, out);
    if (*infer) return cmd_infer(cfg, infer_flags, out);
    if (*compare) return cmd_compare(cfg, compare_flags, out);
    if (matmul_flags.rows == 0) matmul_flags.rows = dim;
    if (matmul_flags.inner == 0) matmul_flags.inner = dim;
    if (matmul_flags.cols == 0) matmul_flags.cols = dim;
    return cmd_matmul(cfg, matmul_flags, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace hepack::cli
