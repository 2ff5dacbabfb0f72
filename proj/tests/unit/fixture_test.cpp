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

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "hepack/cnn/infer.hpp"
#include "hepack/common/binary_io.hpp"
#include "hepack/model/image_io.hpp"
#include "hepack/model/model_file.hpp"
#include "hepack/model/oracle.hpp"
#include "hepack/model/range.hpp"
#include "hepack/slot/sim_backend.hpp"

namespace hepack {
namespace {

const std::filesystem::path kDir = HEPACK_FIXTURE_DIR;

struct Pinned {
  const char* model;
  const char* image;
  std::uint64_t model_hash;
  std::uint64_t image_hash;
  const char* profile;
  std::vector<std::int64_t> logits;
};

const std::vector<Pinned>& pinned() {
  static const std::vector<Pinned> p = {
      {"mnist.json", "digit.pgm", 0x19d5b477fb2fa6ebULL, 0xf0379515e9302934ULL, "desk",
       {-88, 280, -501, 38, -72, 70, 289, 204, -107, -208}},
      {"rop.json", "rop.pgm", 0xd1f8a0b0e20af232ULL, 0xae726b6b1ff70c92ULL, "desk", {-91, -89}},
      {"idrid.json", "idrid.ppm", 0x299c5513b885d1afULL, 0x73b88e0ca627f26cULL, "retina",
       {182963751362, 105904426953}},
  };
  return p;
}

std::uint64_t file_hash(const char* name) { return fnv1a64(read_file_text(kDir / name)); }

TEST(FixtureTest, FilesMatchPinnedHashes) {
  for (const auto& p : pinned()) {
    EXPECT_EQ(file_hash(p.model), p.model_hash) << p.model;
    EXPECT_EQ(file_hash(p.image), p.image_hash) << p.image;
  }
}

TEST(FixtureTest, OracleGivesPinnedLogits) {
  for (const auto& p : pinned()) {
    const model::IntegerModel net = model::load_model(kDir / p.model);
    const int bits = net.input_scale_bits;
    EXPECT_TRUE(model::range_check(net, bits, slot::profile(p.profile).plain_modulus).pass) << p.model;
    const Tensor3 img = model::load_quantized_image(kDir / p.image, bits);
    EXPECT_EQ(model::plaintext_infer_int(net, img), p.logits) << p.model;
  }
}

TEST(FixtureTest, EncryptedInferenceGivesPinnedLogits) {
  for (const auto& p : pinned()) {
    if (std::string(p.model) == "idrid.json") continue;  // oracle only; the encrypted run takes minutes
    const model::IntegerModel net = model::load_model(kDir / p.model);
    const Tensor3 img = model::load_quantized_image(kDir / p.image, net.input_scale_bits);
    slot::SimBackend be(slot::profile(p.profile));
    const auto x = cnn::pack_image(be, img, be.slot_count(), net.input_scale_bits);
    EXPECT_EQ(cnn::decrypt_vector(be, cnn::infer(be, net, x)), p.logits) << p.model;
    if (std::string(p.model) == "mnist.json") {
      const auto px = cnn::pack_image_interleaved(be, img);
      EXPECT_EQ(cnn::decrypt_interleaved(be, cnn::interleaved_infer(be, net, px)), p.logits);
    }
  }
}

}  // namespace
}  // namespace hepack
