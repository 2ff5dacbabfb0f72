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

#include "hepack/model/image_io.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "hepack/common/binary_io.hpp"
#include "hepack/common/error.hpp"

namespace hepack::model {

namespace {

constexpr std::uint32_t kTensorVersion = 1;

class PnmParser {
 public:
  PnmParser(const std::vector<std::uint8_t>& bytes, std::string name) : bytes_(bytes), name_(std::move(name)) {}

  std::uint64_t number() {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("expected a number");
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1ULL << 32)) fail("number too large");
    }
    return v;
  }

  // Single whitespace byte between the header and binary data.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("missing separator before pixel data");
    ++pos_;
  }

  std::uint64_t binary(bool wide) {
    if (pos_ + (wide ? 2 : 1) > bytes_.size()) fail("pixel data is truncated");
    std::uint64_t v = bytes_[pos_++];
    if (wide) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(name_ + ": " + what); }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 2;  // past the two-byte magic
};

RawImage read_pnm(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  const char kind = static_cast<char>(bytes[1]);
  const bool plain = kind == '2' || kind == '3';
  const std::size_t channels = kind == '3' || kind == '6' ? 3 : 1;
  PnmParser p(bytes, name);
  const std::uint64_t width = p.number();
  const std::uint64_t height = p.number();
  const std::uint64_t maxval = p.number();
  if (width == 0 || height == 0) p.fail("empty image");
  if (maxval == 0 || maxval > 65535) p.fail("maximum value must be in [1, 65535]");
  if (!plain) p.end_header();
  RawImage img{Tensor3({channels, height, width}), static_cast<std::int64_t>(maxval)};
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        const std::uint64_t v = plain ? p.number() : p.binary(maxval > 255);
        if (v > maxval) p.fail("pixel exceeds the maximum value");
        img.pixels.at(c, y, x) = static_cast<std::int64_t>(v);
      }
    }
  }
  return img;
}

RawImage read_tensor(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  ByteReader in(bytes);
  in.expect_magic("HPIM");
  if (in.get_u32() != kTensorVersion) throw FormatError(name + ": unsupported tensor version");
  Shape3 shape;
  shape.channels = in.get_u64();
  shape.height = in.get_u64();
  shape.width = in.get_u64();
  if (shape.size() == 0 || shape.size() > in.remaining() / 8) throw FormatError(name + ": bad tensor shape");
  RawImage img{Tensor3(shape), 0};
  for (auto& v : img.pixels.values) v = in.get_i64();
  if (!in.at_end()) throw FormatError(name + ": trailing bytes");
  return img;
}

}  // namespace

RawImage read_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && std::string("2356").find(static_cast<char>(bytes[1])) != std::string::npos) {
    return read_pnm(bytes, path.string());
  }
  if (bytes.size() >= 4 && std::string(bytes.begin(), bytes.begin() + 4) == "HPIM") {
    return read_tensor(bytes, path.string());
  }
  throw FormatError(path.string() + ": not a PGM, PPM or raw tensor file");
}

Tensor3 load_quantized_image(const std::filesystem::path& path, int input_bits) {
  if (input_bits < 1 || input_bits > 30) throw ParameterError("input_bits must be in [1, 30]");
  RawImage raw = read_image(path);
  if (raw.max_value == 0) return std::move(raw.pixels);
  const double top = std::ldexp(1.0, input_bits) - 1;
  for (auto& v : raw.pixels.values) {
    v = static_cast<std::int64_t>(std::round(static_cast<double>(v) * top / static_cast<double>(raw.max_value)));
  }
  return std::move(raw.pixels);
}

void write_pnm(const std::filesystem::path& path, const Tensor3& image, std::int64_t max_value) {
  const Shape3& s = image.shape;
  if (s.channels != 1 && s.channels != 3) throw DimensionError("PNM images have one or three channels");
  if (max_value < 1 || max_value > 65535) throw ParameterError("max_value must be in [1, 65535]");
  const std::string header = std::string(s.channels == 1 ? "P5\n" : "P6\n") + std::to_string(s.width) + " " +
                             std::to_string(s.height) + "\n" + std::to_string(max_value) + "\n";
  ByteWriter out;
  out.put_bytes({reinterpret_cast<const std::uint8_t*>(header.data()), header.size()});
  for (std::size_t y = 0; y < s.height; ++y) {
    for (std::size_t x = 0; x < s.width; ++x) {
      for (std::size_t c = 0; c < s.channels; ++c) {
        const std::int64_t v = image.at(c, y, x);
        if (v < 0 || v > max_value) throw DimensionError("pixel outside [0, max_value]");
        if (max_value > 255) out.put_u8(static_cast<std::uint8_t>(v >> 8));
        out.put_u8(static_cast<std::uint8_t>(v & 0xff));
      }
    }
  }
  write_file_bytes(path, out.bytes());
}

void write_tensor(const std::filesystem::path& path, const Tensor3& t) {
  if (t.values.size() != t.shape.size()) throw DimensionError("tensor values do not match its shape");
  ByteWriter out;
  out.put_magic("HPIM");
  out.put_u32(kTensorVersion);
  out.put_u64(t.shape.channels);
  out.put_u64(t.shape.height);
  out.put_u64(t.shape.width);
  for (std::int64_t v : t.values) out.put_i64(v);
  write_file_bytes(path, out.bytes());
}

}  // namespace hepack::model
