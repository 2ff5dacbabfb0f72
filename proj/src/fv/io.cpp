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

#include "hepack/fv/io.hpp"

#include <nlohmann/json.hpp>

#include "hepack/common/error.hpp"

namespace hepack::fv {

namespace {

constexpr std::string_view kKeyMagic = "HPFK";
constexpr std::uint32_t kKeyVersion = 1;

enum class KeyKind : std::uint8_t { kSecret = 1, kPublic = 2, kRelin = 3, kGalois = 4 };

void put_header(ByteWriter& out, KeyKind kind, const FvContext& ctx) {
  out.put_magic(kKeyMagic);
  out.put_u32(kKeyVersion);
  out.put_u8(static_cast<std::uint8_t>(kind));
  out.put_u64(ctx.fingerprint());
}

void check_header(ByteReader& in, KeyKind kind, const FvContext& ctx) {
  in.expect_magic(kKeyMagic);
  if (in.get_u32() != kKeyVersion) throw FormatError("unsupported key file version");
  if (in.get_u8() != static_cast<std::uint8_t>(kind)) throw FormatError("unexpected key kind");
  if (in.get_u64() != ctx.fingerprint()) {
    throw ParamMismatch("key file was generated under different parameters");
  }
}

void put_switch_key(ByteWriter& out, const KeySwitchKey& key) {
  out.put_u32(static_cast<std::uint32_t>(key.b.size()));
  for (std::size_t i = 0; i < key.b.size(); ++i) {
    write_poly(out, key.b[i]);
    write_poly(out, key.a[i]);
  }
}

KeySwitchKey get_switch_key(ByteReader& in, const FvContext& ctx) {
  const std::uint32_t rows = in.get_u32();
  if (rows != ctx.q_count()) throw FormatError("key-switching key has wrong row count");
  KeySwitchKey key;
  for (std::uint32_t i = 0; i < rows; ++i) {
    key.b.push_back(read_poly(in, ctx));
    key.a.push_back(read_poly(in, ctx));
    if (key.b.back().basis != Basis::kQP || !key.b.back().ntt_form ||
        key.a.back().basis != Basis::kQP || !key.a.back().ntt_form) {
      throw FormatError("key-switching key rows must be NTT-form polynomials mod qP");
    }
  }
  return key;
}

void expect_end(const ByteReader& in, const std::filesystem::path& path) {
  if (!in.at_end()) throw FormatError(path.string() + ": trailing bytes");
}

}  // namespace

void write_poly(ByteWriter& out, const RnsPoly& p) {
  out.put_u8(static_cast<std::uint8_t>(p.basis));
  out.put_u8(p.ntt_form ? 1 : 0);
  out.put_u32(static_cast<std::uint32_t>(p.moduli));
  out.put_u64(p.n);
  out.put_u64_array(p.data);
}

RnsPoly read_poly(ByteReader& in, const FvContext& ctx) {
  const std::uint8_t basis = in.get_u8();
  if (basis > static_cast<std::uint8_t>(Basis::kExt)) throw FormatError("unknown RNS basis");
  const std::uint8_t ntt = in.get_u8();
  if (ntt > 1) throw FormatError("bad NTT flag");
  RnsPoly p = ctx.zero(static_cast<Basis>(basis), ntt == 1);
  if (in.get_u32() != p.moduli || in.get_u64() != p.n) {
    throw FormatError("polynomial shape does not match the parameters");
  }
  in.get_u64_array(p.data);
  const auto idx = ctx.basis(p.basis);
  for (std::size_t j = 0; j < p.moduli; ++j) {
    const std::uint64_t m = ctx.modulus(idx[j]).value();
    for (std::uint64_t v : p.component(j)) {
      if (v >= m) throw FormatError("polynomial residue out of range");
    }
  }
  return p;
}

void write_params_json(const std::filesystem::path& path, const FvParams& p) {
  nlohmann::json j = {{"ring_dimension", p.ring_dimension},
                      {"coeff_prime_count", p.coeff_prime_count},
                      {"coeff_prime_bits", p.coeff_prime_bits},
                      {"special_prime_bits", p.special_prime_bits},
                      {"plain_modulus", p.plain_modulus},
                      {"error_stddev", p.error_stddev},
                      {"verified_depth", p.verified_depth}};
  write_file_text(path, j.dump(2) + "\n");
}

FvParams read_params_json(const std::filesystem::path& path) {
  FvParams p;
  try {
    const auto j = nlohmann::json::parse(read_file_text(path));
    p.ring_dimension = j.at("ring_dimension").get<std::size_t>();
    p.coeff_prime_count = j.at("coeff_prime_count").get<std::size_t>();
    p.coeff_prime_bits = j.at("coeff_prime_bits").get<int>();
    p.special_prime_bits = j.at("special_prime_bits").get<int>();
    p.plain_modulus = j.at("plain_modulus").get<std::uint64_t>();
    p.error_stddev = j.at("error_stddev").get<double>();
    p.verified_depth = j.at("verified_depth").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  p.validate();
  return p;
}

void save_keys(const std::filesystem::path& dir, const FvContext& ctx, const KeySet& keys) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create key directory " + dir.string() + ": " + ec.message());
  write_params_json(dir / "params.json", ctx.params());

  if (!keys.secret.coeffs.empty()) {
    ByteWriter out;
    put_header(out, KeyKind::kSecret, ctx);
    out.put_u64(keys.secret.coeffs.size());
    for (std::int64_t c : keys.secret.coeffs) out.put_u8(static_cast<std::uint8_t>(c + 1));
    write_file_bytes(dir / "secret.key", out.bytes());
  }
  {
    ByteWriter out;
    put_header(out, KeyKind::kPublic, ctx);
    write_poly(out, keys.pub.p0);
    write_poly(out, keys.pub.p1);
    write_file_bytes(dir / "public.key", out.bytes());
  }
  {
    ByteWriter out;
    put_header(out, KeyKind::kRelin, ctx);
    put_switch_key(out, keys.relin);
    write_file_bytes(dir / "relin.key", out.bytes());
  }
  {
    ByteWriter out;
    put_header(out, KeyKind::kGalois, ctx);
    out.put_u32(static_cast<std::uint32_t>(keys.galois.size()));
    for (const auto& [g, key] : keys.galois) {
      out.put_u64(g);
      put_switch_key(out, key);
    }
    write_file_bytes(dir / "galois.key", out.bytes());
  }
}

LoadedKeys load_keys(const std::filesystem::path& dir, bool with_secret) {
  auto ctx = std::make_shared<const FvContext>(read_params_json(dir / "params.json"));
  auto keys = std::make_shared<KeySet>();

  if (with_secret) {
    const auto path = dir / "secret.key";
    const auto bytes = read_file_bytes(path);
    ByteReader in(bytes);
    check_header(in, KeyKind::kSecret, *ctx);
    if (in.get_u64() != ctx->n()) throw FormatError("secret key has wrong length");
    keys->secret.coeffs.resize(ctx->n());
    for (auto& c : keys->secret.coeffs) {
      const std::uint8_t v = in.get_u8();
      if (v > 2) throw FormatError("secret key coefficient is not ternary");
      c = static_cast<std::int64_t>(v) - 1;
    }
    expect_end(in, path);
    keys->secret.ntt_qp = ctx->from_signed(keys->secret.coeffs, Basis::kQP);
    ctx->to_ntt(keys->secret.ntt_qp);
  }
  {
    const auto path = dir / "public.key";
    const auto bytes = read_file_bytes(path);
    ByteReader in(bytes);
    check_header(in, KeyKind::kPublic, *ctx);
    keys->pub.p0 = read_poly(in, *ctx);
    keys->pub.p1 = read_poly(in, *ctx);
    if (keys->pub.p0.basis != Basis::kQ || !keys->pub.p0.ntt_form ||
        keys->pub.p1.basis != Basis::kQ || !keys->pub.p1.ntt_form) {
      throw FormatError("public key must be NTT-form polynomials mod q");
    }
    expect_end(in, path);
  }
  {
    const auto path = dir / "relin.key";
    const auto bytes = read_file_bytes(path);
    ByteReader in(bytes);
    check_header(in, KeyKind::kRelin, *ctx);
    keys->relin = get_switch_key(in, *ctx);
    expect_end(in, path);
  }
  {
    const auto path = dir / "galois.key";
    const auto bytes = read_file_bytes(path);
    ByteReader in(bytes);
    check_header(in, KeyKind::kGalois, *ctx);
    const std::uint32_t count = in.get_u32();
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint64_t g = in.get_u64();
      if (g % 2 == 0 || g >= 2 * ctx->n()) throw FormatError("invalid Galois element");
      keys->galois.emplace(g, get_switch_key(in, *ctx));
    }
    expect_end(in, path);
  }
  return {std::move(ctx), std::move(keys)};
}

}  // namespace hepack::fv
