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

#include "hepack/model/model_file.hpp"

#include <optional>
#include <variant>

#include <nlohmann/json.hpp>

#include "hepack/common/binary_io.hpp"
#include "hepack/common/error.hpp"

namespace hepack::model {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;
constexpr std::string_view kSidecarMagic = "HPMW";

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".weights";
  return p;
}

json encode_values(const std::vector<std::int64_t>& v, std::vector<std::int64_t>* sidecar) {
  if (sidecar) {
    json ref = {{"sidecar", {{"offset", sidecar->size()}, {"count", v.size()}}}};
    sidecar->insert(sidecar->end(), v.begin(), v.end());
    return ref;
  }
  std::size_t nonzero = 0;
  for (std::int64_t w : v) nonzero += w != 0 ? 1 : 0;
  if (2 * nonzero >= v.size()) return v;
  json pairs = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) pairs.push_back({i, v[i]});
  }
  return {{"length", v.size()}, {"nonzero", pairs}};
}

class SidecarReader {
 public:
  explicit SidecarReader(std::optional<std::filesystem::path> path) : path_(std::move(path)) {}

  std::vector<std::int64_t> slice(std::size_t offset, std::size_t count) {
    load();
    if (offset > values_.size() || count > values_.size() - offset) {
      throw FormatError("sidecar reference outside " + path_->string());
    }
    return {values_.begin() + static_cast<std::ptrdiff_t>(offset),
            values_.begin() + static_cast<std::ptrdiff_t>(offset + count)};
  }

 private:
  void load() {
    if (loaded_) return;
    if (!path_) throw FormatError("model references a sidecar but was not loaded from a file");
    const std::vector<std::uint8_t> bytes = read_file_bytes(*path_);
    ByteReader in(bytes);
    in.expect_magic(kSidecarMagic);
    if (in.get_u32() != kVersion) throw FormatError("unsupported sidecar version");
    const std::uint64_t count = in.get_u64();
    if (count > in.remaining() / 8) throw FormatError("sidecar is truncated");
    values_.resize(count);
    for (auto& v : values_) v = in.get_i64();
    if (!in.at_end()) throw FormatError("sidecar has trailing bytes");
    loaded_ = true;
  }

  std::optional<std::filesystem::path> path_;
  std::vector<std::int64_t> values_;
  bool loaded_ = false;
};

std::vector<std::int64_t> decode_values(const json& j, SidecarReader& sidecar) {
  if (j.is_array()) return j.get<std::vector<std::int64_t>>();
  if (j.is_object() && j.contains("sidecar")) {
    const json& ref = j.at("sidecar");
    return sidecar.slice(ref.at("offset").get<std::size_t>(), ref.at("count").get<std::size_t>());
  }
  if (j.is_object() && j.contains("nonzero")) {
    std::vector<std::int64_t> v(j.at("length").get<std::size_t>(), 0);
    for (const json& pair : j.at("nonzero")) {
      const auto i = pair.at(0).get<std::size_t>();
      if (i >= v.size()) throw FormatError("sparse weight index out of range");
      v[i] = pair.at(1).get<std::int64_t>();
    }
    return v;
  }
  throw FormatError("weight array must be a list, a sparse object or a sidecar reference");
}

json to_json(const IntegerModel& net, std::vector<std::int64_t>* sidecar) {
  json layers = json::array();
  for (const auto& layer : net.layers) {
    if (const auto* c = std::get_if<cnn::ConvSpec>(&layer)) {
      layers.push_back({{"type", "conv"},
                        {"filters", c->filters},
                        {"kernel", {c->kernel_h, c->kernel_w}},
                        {"stride", {c->stride_h, c->stride_w}},
                        {"scale_bits", c->scale_bits},
                        {"weights", encode_values(c->weights, sidecar)},
                        {"biases", encode_values(c->biases, nullptr)}});
    } else if (const auto* f = std::get_if<cnn::FcSpec>(&layer)) {
      layers.push_back({{"type", "fc"},
                        {"outputs", f->outputs},
                        {"scale_bits", f->scale_bits},
                        {"weights", encode_values(f->weights, sidecar)},
                        {"biases", encode_values(f->biases, nullptr)}});
    } else {
      layers.push_back({{"type", "square"}});
    }
  }
  return {{"format", "hepack-model"},
          {"version", kVersion},
          {"input", {{"channels", net.input.channels}, {"height", net.input.height}, {"width", net.input.width}}},
          {"input_scale_bits", net.input_scale_bits},
          {"layers", layers}};
}

IntegerModel from_json(const json& doc, SidecarReader& sidecar) {
  if (!doc.is_object() || doc.value("format", "") != "hepack-model") {
    throw FormatError("not a hepack model file");
  }
  if (doc.at("version").get<int>() != kVersion) throw FormatError("unsupported model file version");
  IntegerModel net;
  const json& in = doc.at("input");
  net.input = {in.at("channels").get<std::size_t>(), in.at("height").get<std::size_t>(),
               in.at("width").get<std::size_t>()};
  net.input_scale_bits = doc.value("input_scale_bits", 0);
  Shape3 cur = net.input;
  for (const json& l : doc.at("layers")) {
    const std::string type = l.at("type").get<std::string>();
    if (type == "conv") {
      cnn::ConvSpec c;
      c.filters = l.at("filters").get<std::size_t>();
      c.kernel_h = l.at("kernel").at(0).get<std::size_t>();
      c.kernel_w = l.at("kernel").at(1).get<std::size_t>();
      c.stride_h = l.at("stride").at(0).get<std::size_t>();
      c.stride_w = l.at("stride").at(1).get<std::size_t>();
      c.scale_bits = l.value("scale_bits", 0);
      c.input = cur;
      c.weights = decode_values(l.at("weights"), sidecar);
      c.biases = decode_values(l.at("biases"), sidecar);
      cur = c.output();
      net.layers.emplace_back(std::move(c));
    } else if (type == "fc") {
      cnn::FcSpec f;
      f.inputs = cur.size();
      f.outputs = l.at("outputs").get<std::size_t>();
      f.scale_bits = l.value("scale_bits", 0);
      f.weights = decode_values(l.at("weights"), sidecar);
      f.biases = decode_values(l.at("biases"), sidecar);
      cur = {f.outputs, 1, 1};
      net.layers.emplace_back(std::move(f));
    } else if (type == "square") {
      net.layers.emplace_back(cnn::SquareSpec{});
    } else {
      throw FormatError("unknown layer type '" + type + "'");
    }
  }
  net.validate();
  return net;
}

IntegerModel parse(const std::string& text, SidecarReader& sidecar) {
  try {
    return from_json(json::parse(text), sidecar);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace

std::string model_to_json(const IntegerModel& net) {
  net.validate();
  return to_json(net, nullptr).dump(1) + "\n";
}

IntegerModel model_from_json(const std::string& text) {
  SidecarReader none(std::nullopt);
  return parse(text, none);
}

void save_model(const std::filesystem::path& path, const IntegerModel& net, const SaveOptions& options) {
  net.validate();
  std::vector<std::int64_t> sidecar;
  const json doc = to_json(net, options.use_sidecar ? &sidecar : nullptr);
  if (options.use_sidecar) {
    ByteWriter out;
    out.put_magic(kSidecarMagic);
    out.put_u32(kVersion);
    out.put_u64(sidecar.size());
    for (std::int64_t v : sidecar) out.put_i64(v);
    write_file_bytes(sidecar_path(path), out.bytes());
  }
  write_file_text(path, doc.dump(1) + "\n");
}

IntegerModel load_model(const std::filesystem::path& path) {
  SidecarReader sidecar(sidecar_path(path));
  return parse(read_file_text(path), sidecar);
}

}  // namespace hepack::model
