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

#include "hepack/cnn/files.hpp"

#include "hepack/common/binary_io.hpp"
#include "hepack/common/error.hpp"

namespace hepack::cnn {

namespace {

constexpr std::uint32_t kVersion = 1;

void check_header(ByteReader& in, const slot::Backend& backend, const std::filesystem::path& path) {
  const std::uint32_t version = in.get_u32();
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
  }
  if (in.get_u64() != backend.params().fingerprint()) {
    throw ParamMismatch(path.string() + " was written under different parameters");
  }
}

void write_cts(ByteWriter& out, const slot::Backend& backend, const std::vector<slot::Ciphertext>& cts) {
  out.put_u64(cts.size());
  for (const auto& c : cts) backend.serialize(c, out);
}

std::vector<slot::Ciphertext> read_cts(ByteReader& in, slot::Backend& backend) {
  const std::uint64_t count = in.get_u64();
  if (count > in.remaining()) throw FormatError("ciphertext count exceeds file size");
  std::vector<slot::Ciphertext> cts;
  cts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) cts.push_back(backend.deserialize(in));
  return cts;
}

}  // namespace

void write_encrypted_image(const std::filesystem::path& path, const slot::Backend& backend,
                           const EncryptedImage& image) {
  ByteWriter out;
  out.put_magic("HPEI");
  out.put_u32(kVersion);
  out.put_u64(backend.params().fingerprint());
  out.put_u8(image.packing == Packing::kCompact ? 0 : 1);
  out.put_u64(image.shape.channels);
  out.put_u64(image.shape.height);
  out.put_u64(image.shape.width);
  out.put_u64(image.slots_used);
  out.put_i64(image.scale_bits);
  write_cts(out, backend, image.cts);
  write_file_bytes(path, out.bytes());
}

EncryptedImage read_encrypted_image(const std::filesystem::path& path, slot::Backend& backend) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  ByteReader in(bytes);
  in.expect_magic("HPEI");
  check_header(in, backend, path);
  EncryptedImage image;
  const std::uint8_t packing = in.get_u8();
  if (packing > 1) throw FormatError(path.string() + ": unknown packing tag");
  image.packing = packing == 0 ? Packing::kCompact : Packing::kInterleaved;
  image.shape.channels = in.get_u64();
  image.shape.height = in.get_u64();
  image.shape.width = in.get_u64();
  image.slots_used = in.get_u64();
  image.scale_bits = static_cast<int>(in.get_i64());
  image.cts = read_cts(in, backend);
  if (!in.at_end()) throw FormatError(path.string() + ": trailing bytes");
  const std::size_t s = image.packing == Packing::kCompact ? image.slots_used : 1;
  if (s == 0 || s > backend.slot_count() || image.cts.size() != (image.shape.size() + s - 1) / s) {
    throw FormatError(path.string() + ": ciphertext count does not match shape and slots_used");
  }
  return image;
}

void write_logits(const std::filesystem::path& path, const slot::Backend& backend, const EncryptedLogits& logits) {
  ByteWriter out;
  out.put_magic("HPLG");
  out.put_u32(kVersion);
  out.put_u64(backend.params().fingerprint());
  out.put_i64(logits.scale_bits);
  out.put_u64(logits.slot_map.size());
  for (const auto& [ct, slot] : logits.slot_map) {
    out.put_u64(ct);
    out.put_u64(slot);
  }
  write_cts(out, backend, logits.cts);
  write_file_bytes(path, out.bytes());
}

EncryptedLogits read_logits(const std::filesystem::path& path, slot::Backend& backend) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  ByteReader in(bytes);
  in.expect_magic("HPLG");
  check_header(in, backend, path);
  EncryptedLogits logits;
  logits.scale_bits = static_cast<int>(in.get_i64());
  const std::uint64_t count = in.get_u64();
  if (count > in.remaining() / 16) throw FormatError(path.string() + ": slot map exceeds file size");
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t ct = in.get_u64();
    const std::uint64_t slot = in.get_u64();
    logits.slot_map.emplace_back(ct, slot);
  }
  logits.cts = read_cts(in, backend);
  if (!in.at_end()) throw FormatError(path.string() + ": trailing bytes");
  for (const auto& [ct, slot] : logits.slot_map) {
    if (ct >= logits.cts.size() || slot >= backend.slot_count()) {
      throw FormatError(path.string() + ": slot map points outside the ciphertexts");
    }
  }
  return logits;
}

std::vector<std::int64_t> decrypt_logits(slot::Backend& backend, const EncryptedLogits& logits) {
  std::vector<slot::PlainVec> plain;
  plain.reserve(logits.cts.size());
  for (const auto& c : logits.cts) plain.push_back(backend.decrypt(c));
  std::vector<std::int64_t> out;
  for (const auto& [ct, slot] : logits.slot_map) out.push_back(plain.at(ct)[slot]);
  return out;
}

}  // namespace hepack::cnn
