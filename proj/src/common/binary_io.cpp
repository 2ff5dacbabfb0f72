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

#include "hepack/common/binary_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "hepack/common/error.hpp"

namespace hepack {

void ByteWriter::put_u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_magic(std::string_view magic) {
  bytes_.insert(bytes_.end(), magic.begin(), magic.end());
}

void ByteWriter::put_string(std::string_view s) {
  put_u32(static_cast<std::uint32_t>(s.size()));
  bytes_.insert(bytes_.end(), s.begin(), s.end());
}

void ByteWriter::put_u64_array(std::span<const std::uint64_t> values) {
  bytes_.reserve(bytes_.size() + 8 * values.size());
  for (std::uint64_t v : values) put_u64(v);
}

void ByteWriter::put_bytes(std::span<const std::uint8_t> raw) {
  bytes_.insert(bytes_.end(), raw.begin(), raw.end());
}

void ByteReader::require(std::size_t count) const {
  if (bytes_.size() - pos_ < count) {
    throw FormatError("truncated input: need " + std::to_string(count) +
                      " bytes at offset " + std::to_string(pos_));
  }
}

std::uint8_t ByteReader::get_u8() {
  require(1);
  return bytes_[pos_++];
}

std::uint32_t ByteReader::get_u32() {
  require(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::get_u64() {
  require(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
  return v;
}

void ByteReader::expect_magic(std::string_view magic) {
  require(magic.size());
  for (char c : magic) {
    if (static_cast<char>(bytes_[pos_++]) != c) {
      throw FormatError("bad magic, expected '" + std::string(magic) + "'");
    }
  }
}

std::string ByteReader::get_string() {
  const std::uint32_t size = get_u32();
  require(size);
  std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), size);
  pos_ += size;
  return s;
}

void ByteReader::get_u64_array(std::span<std::uint64_t> out) {
  require(8 * out.size());
  for (auto& v : out) v = get_u64();
}

std::span<const std::uint8_t> ByteReader::get_bytes(std::size_t count) {
  require(count);
  auto view = bytes_.subspan(pos_, count);
  pos_ += count;
  return view;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("short write to " + path.string());
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hepack
