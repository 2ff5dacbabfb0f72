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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <random>
#include <sstream>

#include "hepack/cnn/files.hpp"
#include "hepack/cnn/infer.hpp"
#include "hepack/cnn/plan.hpp"
#include "hepack/common/error.hpp"
#include "hepack/fv/backend.hpp"
#include "hepack/fv/io.hpp"
#include "hepack/hemat/matrix.hpp"
#include "hepack/model/generate.hpp"
#include "hepack/model/image_io.hpp"
#include "hepack/model/model_file.hpp"
#include "hepack/model/range.hpp"
#include "hepack/slot/sim_backend.hpp"

namespace hepack::cli {

namespace {

using Clock = std::chrono::steady_clock;

template <typename T>
void metric(std::ostream& out, std::string_view key, const T& value) {
  out << "METRIC " << key << ' ' << value << '\n';
}

std::string join(const std::vector<std::int64_t>& values, char sep) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(values[i]);
  }
  return s;
}

std::string human_bytes(std::uint64_t bytes) {
  std::ostringstream os;
  const double b = static_cast<double>(bytes);
  os << std::fixed << std::setprecision(2);
  if (b >= 1e9) {
    os << b / 1e9 << " GB";
  } else {
    os << b / 1e6 << " MB";
  }
  return os.str();
}

std::string ratio_text(double a, double b) {
  if (b == 0) return "-";
  std::ostringstream os;
  const double r = a / b;
  if (r == std::floor(r) && r < 1e15) {
    os << static_cast<std::uint64_t>(r);
  } else {
    os << std::fixed << std::setprecision(2) << r;
  }
  return os.str();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw ParameterError(std::string(flag) + " is required");
}

std::size_t resolve_slots(const RunConfig& cfg, std::size_t slot_count) {
  if (cfg.slots_used == 0) return slot_count;
  if (cfg.slots_used > slot_count) {
    throw ParameterError("--slots-used " + std::to_string(cfg.slots_used) + " exceeds the profile's " +
                         std::to_string(slot_count) + " slots");
  }
  return cfg.slots_used;
}

fv::FvParams fv_params_for(const slot::BackendParams& p) {
  return p.name == "desk" ? fv::FvParams::desk() : fv::FvParams::for_profile(p);
}

void describe_backend(std::ostream& out, const std::string& kind, const slot::Backend& be) {
  const auto& p = be.params();
  out << "backend " << kind << ", profile " << p.name << " (n = " << p.ring_dimension << ", t = " << p.plain_modulus
      << ", " << p.slot_count << " slots, depth budget " << p.depth_budget << ")\n";
}

cnn::EncryptedImage encrypt_image(slot::Backend& be, const Tensor3& img, cnn::Packing packing, std::size_t slots,
                                  int bits) {
  cnn::EncryptedImage e;
  e.packing = packing;
  e.shape = img.shape;
  e.scale_bits = bits;
  if (packing == cnn::Packing::kCompact) {
    e.slots_used = slots;
    e.cts = cnn::pack_image(be, img, slots, bits).cts;
  } else {
    e.slots_used = be.slot_count();
    e.cts = cnn::pack_image_interleaved(be, img);
  }
  return e;
}

bool within_bits(const Tensor3& img, int bits) {
  const std::int64_t top = (std::int64_t{1} << bits) - 1;
  for (std::int64_t v : img.values) {
    if (v < 0 || v > top) return false;
  }
  return true;
}

struct RunResult {
  cnn::EncryptedLogits logits;
  slot::CostReport cost;
  double seconds = 0;
};

RunResult run_network(slot::Backend& be, const cnn::NetworkSpec& net, const cnn::EncryptedImage& img,
                      const cnn::InferOptions& options) {
  RunResult r;
  be.reset_counters();
  const auto start = Clock::now();
  if (img.packing == cnn::Packing::kCompact) {
    const hemat::PackedVector x{img.shape.size(), img.slots_used, img.scale_bits, img.shape, img.cts};
    const hemat::PackedVector y = cnn::infer(be, net, x, options);
    r.seconds = seconds_since(start);
    r.logits.scale_bits = y.scale_bits;
    for (std::size_t i = 0; i < y.length; ++i) r.logits.slot_map.emplace_back(i / y.slots_used, i % y.slots_used);
    r.logits.cts = y.cts;
  } else {
    r.logits.cts = cnn::interleaved_infer(be, net, img.cts, options);
    r.seconds = seconds_since(start);
    r.logits.scale_bits = net.scale_ledger().back();
    for (std::size_t i = 0; i < r.logits.cts.size(); ++i) r.logits.slot_map.emplace_back(i, 0);
  }
  r.cost = be.cost_report();
  return r;
}

void print_cost(std::ostream& out, const slot::CostReport& c) {
  out << "  mult " << c.mult_count << ", cmult " << c.cmult_count << ", add " << c.add_count << ", rotations "
      << c.rotation_count << ", encryptions " << c.encrypt_count << "\n"
      << "  peak live ciphertexts " << c.peak_live_ciphertexts << ", levels used " << c.max_level_used << "\n";
}

void cost_metrics(std::ostream& out, const slot::CostReport& c) {
  metric(out, "mult_count", c.mult_count);
  metric(out, "cmult_count", c.cmult_count);
  metric(out, "add_count", c.add_count);
  metric(out, "rotation_count", c.rotation_count);
  metric(out, "encrypt_count", c.encrypt_count);
  metric(out, "peak_live_ciphertexts", c.peak_live_ciphertexts);
  metric(out, "levels_used", c.max_level_used);
}

cnn::NetworkSpec shape_network(const std::string& shape, std::uint64_t seed) {
  Shape3 input;
  model::RandomNetworkOptions opts;
  if (shape == "mnist") {
    input = {1, 28, 28};
  } else if (shape == "rop") {
    input = {1, 96, 96};
    opts.architecture.classes = 2;
  } else if (shape == "idrid") {
    input = {3, 256, 256};
    opts.architecture.classes = 2;
  } else {
    throw ParameterError("unknown shape '" + shape + "' (expected mnist, rop or idrid)");
  }
  std::mt19937_64 rng(seed);
  return model::random_network(rng, input, opts);
}

}  // namespace

slot::BackendParams resolve_profile(const RunConfig& cfg) {
  if (cfg.profiles_file.empty()) return slot::profile(cfg.profile);
  const auto all = slot::load_profiles(cfg.profiles_file);
  const auto it = all.find(cfg.profile);
  if (it == all.end()) {
    throw ParameterError("profile '" + cfg.profile + "' not found in " + cfg.profiles_file.string());
  }
  return it->second;
}

Session open_session(const RunConfig& cfg) {
  Session s;
  if (cfg.backend == "sim") {
    if (!cfg.keys.empty()) throw ParameterError("--keys applies to the fv backend only");
    s.backend = std::make_unique<slot::SimBackend>(resolve_profile(cfg));
  } else if (cfg.backend == "fv") {
    if (cfg.keys.empty()) {
      s.backend = std::make_unique<fv::FvBackend>(fv_params_for(resolve_profile(cfg)), cfg.seed);
    } else {
      s.can_decrypt = std::filesystem::exists(cfg.keys / "secret.key");
      const fv::LoadedKeys loaded = fv::load_keys(cfg.keys, s.can_decrypt);
      s.backend = std::make_unique<fv::FvBackend>(loaded.context, loaded.keys, cfg.seed);
    }
  } else {
    throw ParameterError("unknown backend '" + cfg.backend + "'");
  }
  return s;
}

int cmd_keygen(const RunConfig& cfg, std::ostream& out) {
  if (cfg.backend != "fv") throw ParameterError("keygen needs --backend fv; the simulator has no keys");
  require(cfg.out, "--out");
  const fv::FvParams params = fv_params_for(resolve_profile(cfg));
  fv::FvBackend be(params, cfg.seed);
  fv::save_keys(cfg.out, be.context(), be.keys());
  out << "keys for " << params.describe() << " written to " << cfg.out.string() << "\n";

  std::mt19937_64 rng(cfg.seed);
  const auto t = static_cast<std::int64_t>(be.plain_modulus());
  std::uniform_int_distribution<std::int64_t> dist(-(t - 1) / 2, (t - 1) / 2);
  slot::PlainVec v(be.slot_count());
  for (auto& x : v.values()) x = dist(rng);

  const fv::LoadedKeys loaded = fv::load_keys(cfg.out);
  fv::FvBackend reloaded(loaded.context, loaded.keys, cfg.seed + 1);
  const bool ok = reloaded.decrypt(reloaded.encrypt(v)) == v;
  out << "decrypt after encrypt with the written keys: " << (ok ? "ok" : "MISMATCH") << "\n";
  metric(out, "slot_count", be.slot_count());
  metric(out, "roundtrip", ok ? 1 : 0);
  return ok ? kOk : kFailure;
}

int cmd_encrypt_image(const RunConfig& cfg, const EncryptFlags& flags, std::ostream& out) {
  require(cfg.image, "--image");
  require(cfg.out, "--out");
  int bits = 8;
  if (flags.bits) {
    bits = *flags.bits;
  } else if (!cfg.model.empty()) {
    bits = model::load_model(cfg.model).input_scale_bits;
  }
  if (bits < 0 || bits > 30) throw ParameterError("--bits must be in [0, 30]");
  Session s = open_session(cfg);
  slot::Backend& be = *s.backend;
  const cnn::Packing packing = cnn::parse_packing(cfg.packing);
  const std::size_t slots = resolve_slots(cfg, be.slot_count());
  const Tensor3 img = model::load_quantized_image(cfg.image, bits);
  const cnn::EncryptedImage enc = encrypt_image(be, img, packing, slots, bits);
  cnn::write_encrypted_image(cfg.out, be, enc);
  const auto bytes = std::filesystem::file_size(cfg.out);
  out << "encrypted " << img.shape.to_string() << " image at " << bits << " bits into " << enc.cts.size() << ' '
      << cnn::to_string(packing) << " ciphertext" << (enc.cts.size() == 1 ? "" : "s") << " (" << bytes
      << " bytes) at " << cfg.out.string() << "\n";
  metric(out, "ciphertexts", enc.cts.size());
  metric(out, "file_bytes", bytes);
  return kOk;
}

int cmd_infer(const RunConfig& cfg, const InferFlags& flags, std::ostream& out) {
  require(cfg.model, "--model");
  if (cfg.image.empty() == cfg.encrypted.empty()) {
    throw ParameterError("give exactly one of --image and --encrypted");
  }
  const model::IntegerModel net = model::load_model(cfg.model);
  Session s = open_session(cfg);
  slot::Backend& be = *s.backend;
  const int bits = net.input_scale_bits;

  cnn::EncryptedImage enc;
  if (!cfg.encrypted.empty()) {
    enc = cnn::read_encrypted_image(cfg.encrypted, be);
  } else {
    const Tensor3 img = model::load_quantized_image(cfg.image, bits);
    if (img.shape != net.input) {
      throw DimensionError("image is " + img.shape.to_string() + " but the model expects " + net.input.to_string());
    }
    if (!flags.skip_range_check && !within_bits(img, bits)) {
      throw OverflowError("image values exceed the model's " + std::to_string(bits) + "-bit input range");
    }
    enc = encrypt_image(be, img, cnn::parse_packing(cfg.packing), resolve_slots(cfg, be.slot_count()), bits);
  }
  if (enc.shape != net.input) {
    throw DimensionError("encrypted image is " + enc.shape.to_string() + " but the model expects " +
                         net.input.to_string());
  }

  describe_backend(out, cfg.backend, be);
  out << "model " << cfg.model.string() << ": " << net.layers.size() << " layers, input " << net.input.to_string()
      << " at " << bits << " bits\n";
  if (!flags.skip_range_check) {
    const model::RangeCertificate cert = model::range_check(net, bits, be.plain_modulus());
    out << "overflow certificate: final bound " << model::to_string(cert.final_bound()) << ", limit "
        << model::to_string(cert.limit) << ", " << (cert.pass ? "pass" : "fail") << "\n";
    if (!cert.pass) {
      throw OverflowError("logits may wrap modulo t; refusing to run (use --skip-range-check to override)");
    }
  }

  const cnn::InferencePlan plan =
      cnn::plan_inference(net, enc.packing, be.params(), enc.slots_used, {.count_ops = false});
  const RunResult r = run_network(be, net, enc, {cfg.threads, true, cfg.memory_cap_bytes});

  out << "packing " << cnn::to_string(enc.packing) << ", input ciphertexts " << enc.cts.size()
      << ", output ciphertexts " << r.logits.cts.size() << "\n";
  print_cost(out, r.cost);
  out << "  estimated memory: ciphertexts " << human_bytes(plan.peak_ciphertext_bytes) << ", keys "
      << human_bytes(plan.key_bytes) << "\n";
  metric(out, "packing", cnn::to_string(enc.packing));
  metric(out, "input_ciphertexts", enc.cts.size());
  cost_metrics(out, r.cost);
  metric(out, "estimated_bytes", plan.estimated_bytes());
  if (s.can_decrypt) {
    const std::vector<std::int64_t> logits = cnn::decrypt_logits(be, r.logits);
    out << "logits (scale 2^" << r.logits.scale_bits << "): " << join(logits, ' ') << "\n";
    out << "prediction: " << cnn::argmax(logits) << "\n";
    metric(out, "logits", join(logits, ','));
    metric(out, "prediction", cnn::argmax(logits));
  } else {
    out << "no secret key; logits left encrypted\n";
  }
  if (!cfg.out.empty()) {
    cnn::write_logits(cfg.out, be, r.logits);
    out << "encrypted logits written to " << cfg.out.string() << "\n";
  }
  out << "wall time " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
  out << std::defaultfloat;
  metric(out, "wall_seconds", r.seconds);
  return kOk;
}

int cmd_compare(const RunConfig& cfg, const CompareFlags& flags, std::ostream& out) {
  if (cfg.model.empty() == flags.shape.empty()) throw ParameterError("give exactly one of --model and --shape");
  const cnn::NetworkSpec net = cfg.model.empty() ? shape_network(flags.shape, cfg.seed) : model::load_model(cfg.model);
  const slot::BackendParams params = resolve_profile(cfg);
  const std::size_t slots = resolve_slots(cfg, params.slot_count);
  const cnn::InferencePlan plans[2] = {
      cnn::plan_inference(net, cnn::Packing::kCompact, params, slots),
      cnn::plan_inference(net, cnn::Packing::kInterleaved, params, slots)};
  bool refused[2];
  for (int i = 0; i < 2; ++i) {
    refused[i] = cfg.memory_cap_bytes != 0 && plans[i].estimated_bytes() > cfg.memory_cap_bytes;
  }

  out << "compact vs interleaved, input " << net.input.to_string() << ", profile " << params.name << " ("
      << slots << " slots used)\n";
  out << std::left << std::setw(26) << "" << std::right << std::setw(18) << "compact" << std::setw(18)
      << "interleaved" << std::setw(12) << "ratio" << "\n";
  auto row = [&](const std::string& name, std::uint64_t c, std::uint64_t i) {
    out << std::left << std::setw(26) << name << std::right << std::setw(18) << c << std::setw(18) << i
        << std::setw(12) << ratio_text(static_cast<double>(i), static_cast<double>(c)) << "\n";
  };
  const auto& c = plans[0];
  const auto& v = plans[1];
  row("input ciphertexts", c.input_cts, v.input_cts);
  row("mult", c.ops.mult_count, v.ops.mult_count);
  row("cmult", c.ops.cmult_count, v.ops.cmult_count);
  row("add", c.ops.add_count, v.ops.add_count);
  row("rotations", c.ops.rotation_count, v.ops.rotation_count);
  row("encryptions", c.ops.encrypt_count, v.ops.encrypt_count);
  row("levels", c.depth, v.depth);
  row("peak live ciphertexts", c.ops.peak_live_ciphertexts, v.ops.peak_live_ciphertexts);
  row("ciphertext bytes", c.ciphertext_bytes, v.ciphertext_bytes);
  row("peak ciphertext bytes", c.peak_ciphertext_bytes, v.peak_ciphertext_bytes);
  row("key bytes", c.key_bytes, v.key_bytes);
  row("estimated bytes", c.estimated_bytes(), v.estimated_bytes());
  auto cell = [&](int i) { return refused[i] ? std::string("> cap") : human_bytes(plans[i].estimated_bytes()); };
  out << std::left << std::setw(26) << "estimated memory" << std::right << std::setw(18) << cell(0)
      << std::setw(18) << cell(1) << "\n";
  if (cfg.memory_cap_bytes != 0) {
    out << "memory cap " << human_bytes(cfg.memory_cap_bytes) << "\n";
    for (int i = 0; i < 2; ++i) {
      if (refused[i]) {
        out << cnn::to_string(plans[i].packing) << " refused: estimate " << human_bytes(plans[i].estimated_bytes())
            << " exceeds the cap\n";
      }
    }
  }

  metric(out, "compact_input_ciphertexts", c.input_cts);
  metric(out, "interleaved_input_ciphertexts", v.input_cts);
  metric(out, "input_ciphertext_ratio", ratio_text(v.input_cts, c.input_cts));
  metric(out, "cmult_ratio", ratio_text(v.ops.cmult_count, c.ops.cmult_count));
  metric(out, "peak_ciphertext_bytes_ratio", ratio_text(v.peak_ciphertext_bytes, c.peak_ciphertext_bytes));
  metric(out, "estimated_bytes_ratio", ratio_text(v.estimated_bytes(), c.estimated_bytes()));
  metric(out, "compact_estimated_bytes", c.estimated_bytes());
  metric(out, "interleaved_estimated_bytes", v.estimated_bytes());
  metric(out, "compact_refused", refused[0] ? 1 : 0);
  metric(out, "interleaved_refused", refused[1] ? 1 : 0);

  if (!flags.execute) return kOk;
  if (cfg.backend != "sim") throw ParameterError("compare --execute runs on the sim backend only");
  Tensor3 img;
  if (cfg.image.empty()) {
    std::mt19937_64 rng(cfg.seed);
    img = model::random_image(rng, net.input, net.input_scale_bits);
  } else {
    img = model::load_quantized_image(cfg.image, net.input_scale_bits);
  }
  std::optional<std::vector<std::int64_t>> logits[2];
  double seconds[2] = {0, 0};
  for (int i = 0; i < 2; ++i) {
    if (refused[i]) continue;
    slot::SimBackend be(params);
    const cnn::EncryptedImage enc = encrypt_image(be, img, plans[i].packing, slots, net.input_scale_bits);
    const RunResult r = run_network(be, net, enc, {cfg.threads, true, 0});
    logits[i] = cnn::decrypt_logits(be, r.logits);
    seconds[i] = r.seconds;
    out << cnn::to_string(plans[i].packing) << " run: prediction " << cnn::argmax(*logits[i]) << ", wall time "
        << std::fixed << std::setprecision(3) << r.seconds << " s\n"
        << std::defaultfloat;
    metric(out, cnn::to_string(plans[i].packing) + "_prediction", cnn::argmax(*logits[i]));
    metric(out, cnn::to_string(plans[i].packing) + "_wall_seconds", r.seconds);
  }
  if (logits[0] && logits[1]) {
    const bool agree = *logits[0] == *logits[1];
    out << "logits agree: " << (agree ? "yes" : "NO") << ", wall time ratio "
        << ratio_text(seconds[1], seconds[0]) << "\n";
    metric(out, "logits_agree", agree ? 1 : 0);
    if (!agree) return kFailure;
  }
  return kOk;
}

int cmd_matmul(const RunConfig& cfg, const MatmulFlags& flags, std::ostream& out) {
  if (flags.rows == 0 || flags.inner == 0 || flags.cols == 0) throw ParameterError("matrix sizes must be positive");
  if (flags.entry_bound < 0) throw ParameterError("--entry-bound must be non-negative");
  Session s = open_session(cfg);
  slot::Backend& be = *s.backend;
  const std::size_t slots = resolve_slots(cfg, be.slot_count());
  const hemat::Layout la = hemat::parse_layout(flags.layout_a);
  const hemat::Layout lb = hemat::parse_layout(flags.layout_b);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> dist(-flags.entry_bound, flags.entry_bound);
  hemat::PlainMatrix a(flags.rows, flags.inner), b(flags.inner, flags.cols);
  for (auto& x : a.data) x = dist(rng);
  for (auto& x : b.data) x = dist(rng);

  const hemat::EncMatrix ea = hemat::pack_matrix(be, a, la, slots);
  const hemat::EncMatrix eb = hemat::pack_matrix(be, b, lb, slots);
  const slot::CostReport before = be.cost_report();
  const hemat::EncMatrix ra = hemat::convert_layout(be, ea, hemat::Layout::kRCP);
  const hemat::EncMatrix rb = hemat::convert_layout(be, eb, hemat::Layout::kCCP);
  const auto start = Clock::now();
  const hemat::EncMatrix ec = hemat::mat_mul(be, ra, rb);
  const double secs = seconds_since(start);
  const slot::CostReport delta = be.cost_report() - before;

  describe_backend(out, cfg.backend, be);
  out << "A (" << a.rows << "x" << a.cols << ", " << hemat::to_string(la) << ") times B (" << b.rows << "x"
      << b.cols << ", " << hemat::to_string(lb) << "), " << slots << " slots used\n";
  out << "operation counts for the product:\n";
  print_cost(out, delta);
  cost_metrics(out, delta);
  metric(out, "result_ciphertexts", ec.cts.size());

  if (!cfg.out.empty()) {
    ByteWriter w;
    hemat::serialize(be, ec, w);
    write_file_bytes(cfg.out, w.bytes());
    out << "encrypted product written to " << cfg.out.string() << "\n";
  }
  if (!s.can_decrypt) return kOk;

  const hemat::PlainMatrix got = hemat::unpack_matrix(be, ec);
  const auto t = static_cast<__int128>(be.plain_modulus());
  bool ok = got.rows == a.rows && got.cols == b.cols;
  for (std::size_t i = 0; ok && i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      __int128 sum = 0;
      for (std::size_t k = 0; k < a.cols; ++k) sum += static_cast<__int128>(a.at(i, k)) * b.at(k, j);
      sum %= t;
      if (sum < 0) sum += t;
      if (sum > (t - 1) / 2) sum -= t;
      if (got.at(i, j) != static_cast<std::int64_t>(sum)) ok = false;
    }
  }
  if (got.rows * got.cols <= 64) {
    out << "product:\n";
    for (std::size_t i = 0; i < got.rows; ++i) {
      out << " ";
      for (std::size_t j = 0; j < got.cols; ++j) out << ' ' << std::setw(5) << got.at(i, j);
      out << "\n";
    }
  }
  out << "matches plaintext product mod t: " << (ok ? "yes" : "NO") << "\n";
  out << "wall time " << std::fixed << std::setprecision(3) << secs << " s\n" << std::defaultfloat;
  metric(out, "matches_oracle", ok ? 1 : 0);
  metric(out, "wall_seconds", secs);
  return ok ? kOk : kFailure;
}

}  // namespace hepack::cli
