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

#include <chrono>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "hepack/cnn/compile.hpp"
#include "hepack/cnn/files.hpp"
#include "hepack/cnn/infer.hpp"
#include "hepack/cnn/plan.hpp"
#include "hepack/common/error.hpp"
#include "hepack/fv/backend.hpp"
#include "hepack/model/generate.hpp"
#include "hepack/model/oracle.hpp"
#include "hepack/slot/sim_backend.hpp"

namespace hepack::cnn {
namespace {

using model::centered_mod;

slot::BackendParams desk() { return slot::profile("desk"); }

// Same ring and modulus as `name`, with `slots` slots so that thousands
// of ciphertexts stay cheap to simulate.
slot::BackendParams narrow(const std::string& name, std::size_t slots) {
  slot::BackendParams p = slot::profile(name);
  p.slot_count = slots;
  return p;
}

std::vector<std::int64_t> mod_t(std::vector<std::int64_t> v, std::uint64_t t) {
  for (auto& x : v) x = centered_mod(x, t);
  return v;
}

ConvSpec random_conv(std::mt19937_64& rng, Shape3 in, std::size_t filters, std::size_t k, std::size_t stride) {
  ConvSpec c;
  c.filters = filters;
  c.kernel_h = c.kernel_w = k;
  c.stride_h = c.stride_w = stride;
  c.input = in;
  std::uniform_int_distribution<std::int64_t> d(-7, 7);
  c.weights.resize(filters * in.channels * k * k);
  for (auto& w : c.weights) w = d(rng);
  c.biases.resize(filters);
  for (auto& b : c.biases) b = d(rng);
  return c;
}

// A Table-1 shaped network small enough for exhaustive checks.
model::Architecture small_arch() { return {3, 3, 4}; }
constexpr Shape3 kSmall{2, 16, 16};

TEST(NetworkTest, Table1Shapes) {
  const NetworkSpec mnist = table1_network({1, 28, 28});
  EXPECT_EQ(mnist.lengths(), (std::vector<std::size_t>{784, 3600, 3600, 800, 800, 10}));
  EXPECT_EQ(mnist.shapes()[0], (Shape3{25, 12, 12}));
  EXPECT_EQ(mnist.shapes()[2], (Shape3{50, 4, 4}));
  EXPECT_EQ(mnist.depth_cost(), 8u);
  EXPECT_EQ(mnist.interleaved_depth_cost(), 5u);
  const NetworkSpec rop = table1_network({1, 96, 96}, 2);
  EXPECT_EQ(rop.lengths(), (std::vector<std::size_t>{9216, 52900, 52900, 22050, 22050, 2}));
  const NetworkSpec idrid = table1_network({3, 256, 256}, 2);
  EXPECT_EQ(idrid.lengths()[1], 25u * 126 * 126);
  EXPECT_EQ(idrid.lengths()[3], 50u * 61 * 61);
}

TEST(NetworkTest, ShapeErrors) {
  NetworkSpec net = table1_network({1, 28, 28});
  std::get<ConvSpec>(net.layers[2]).input = {25, 13, 12};
  EXPECT_THROW(net.validate(), ShapeError);
  EXPECT_THROW(table1_network({1, 4, 4}), ShapeError);
  NetworkSpec bad_fc = table1_network({1, 28, 28});
  std::get<FcSpec>(bad_fc.layers[4]).weights.pop_back();
  EXPECT_THROW(bad_fc.validate(), ShapeError);
  EXPECT_THROW(NetworkSpec{}.validate(), ShapeError);
}

TEST(NetworkTest, ScaleLedger) {
  NetworkSpec net = table1_network({1, 28, 28});
  net.input_scale_bits = 8;
  std::get<ConvSpec>(net.layers[0]).scale_bits = 4;
  std::get<ConvSpec>(net.layers[2]).scale_bits = 4;
  std::get<FcSpec>(net.layers[4]).scale_bits = 4;
  EXPECT_EQ(net.scale_ledger(), (std::vector<int>{12, 24, 28, 56, 60}));
}

TEST(PackTest, CompactCounts) {
  slot::SimBackend be(slot::profile("mnist"));
  EXPECT_EQ(pack_image(be, Tensor3({1, 28, 28}), 8192).cts.size(), 1u);
  EXPECT_EQ(pack_image(be, Tensor3({1, 96, 96}), 8192).cts.size(), 2u);
  EXPECT_EQ(pack_image(be, Tensor3({3, 256, 256}), 8192).cts.size(), 24u);
  EXPECT_THROW(pack_image(be, Tensor3({0, 2, 2}), 8192), DimensionError);
  EXPECT_THROW(pack_image(be, Tensor3({1, 2, 2}), 8193), DimensionError);
}

TEST(PackTest, ChannelMajorOrder) {
  slot::SimBackend be(desk());
  Tensor3 img({2, 2, 3});
  for (std::size_t i = 0; i < img.values.size(); ++i) img.values[i] = static_cast<std::int64_t>(i + 1);
  EXPECT_EQ(img.at(1, 0, 2), 9);
  const auto v = pack_image(be, img, 5);
  ASSERT_EQ(v.cts.size(), 3u);
  const auto second = be.decrypt(v.cts[1]);
  EXPECT_EQ(std::vector<std::int64_t>(second.values().begin(), second.values().begin() + 6),
            (std::vector<std::int64_t>{6, 7, 8, 9, 10, 0}));
  EXPECT_EQ(decrypt_vector(be, v), img.values);
}

TEST(PackTest, InterleavedCounts) {
  slot::SimBackend be({"tiny", 8, 60, 97, 4, 8, 0});
  EXPECT_EQ(pack_image_interleaved(be, Tensor3({1, 2, 2}, 3)).size(), 4u);
  EXPECT_EQ(pack_image_interleaved(be, Tensor3({1, 28, 28})).size(), 784u);
  EXPECT_EQ(pack_image_interleaved(be, Tensor3({1, 96, 96})).size(), 9216u);
  const auto px = pack_image_interleaved(be, Tensor3({1, 1, 1}, 5));
  EXPECT_EQ(be.decrypt(px[0]), slot::PlainVec(4, 5));
}

TEST(CompileTest, PointwiseConvIsOneHot) {
  ConvSpec c;
  c.filters = 1;
  c.kernel_h = c.kernel_w = 1;
  c.input = {1, 2, 2};
  c.weights = {1};
  c.biases = {0};
  const auto rows = compile_conv(c);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(rows[i].index, (std::vector<std::uint32_t>{static_cast<std::uint32_t>(i)}));
    EXPECT_EQ(rows[i].weight, (std::vector<std::int64_t>{1}));
  }
}

TEST(CompileTest, Table1RowCounts) {
  const NetworkSpec net = table1_network({1, 28, 28});
  EXPECT_EQ(ConvRows(std::get<ConvSpec>(net.layers[0])).row_count(), 3600u);
  EXPECT_EQ(ConvRows(std::get<ConvSpec>(net.layers[2])).row_count(), 800u);
  const FcRows fc(std::get<FcSpec>(net.layers[4]));
  EXPECT_EQ(fc.row_count(), 10u);
  EXPECT_EQ(fc.input_length(), 800u);
}

TEST(CompileTest, ConvRowPositions) {
  std::mt19937_64 rng(1);
  const ConvSpec c = random_conv(rng, {3, 9, 8}, 4, 3, 2);
  const Shape3 out = c.output();
  EXPECT_EQ(out, (Shape3{4, 4, 3}));
  const ConvRows rows(c);
  for (std::size_t f = 0; f < out.channels; ++f) {
    for (std::size_t oy = 0; oy < out.height; ++oy) {
      for (std::size_t ox = 0; ox < out.width; ++ox) {
        const hemat::WeightRow r = rows.row(out.index(f, oy, ox));
        EXPECT_EQ(r.bias, c.biases[f]);
        std::vector<std::int64_t> expected(c.input.size(), 0);
        for (std::size_t ch = 0; ch < 3; ++ch) {
          for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
              expected[ch * 72 + (oy * 2 + i) * 8 + ox * 2 + j] = c.weight(f, ch, i, j);
            }
          }
        }
        EXPECT_EQ(r.dense(c.input.size()), expected);
      }
    }
  }
  ConvSpec wide = c;
  wide.kernel_w = 9;
  EXPECT_THROW(ConvRows{wide}, ShapeError);
}

TEST(CompileTest, ZeroSegmentFlags) {
  hemat::WeightRow r{{1, 9}, {2, 0}, 0, 0};
  EXPECT_EQ(zero_segments(r, 12, 4), (std::vector<bool>{false, true, true}));
}

TEST(LayerEvalTest, IdentityAndSumRows) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(2);
  const Tensor3 img = model::random_image(rng, {1, 28, 28}, 8);
  const auto x = pack_image(be, img, 2048);

  FcSpec id{784, 784, std::vector<std::int64_t>(784 * 784, 0), std::vector<std::int64_t>(784, 0), 0};
  for (std::size_t i = 0; i < 784; ++i) id.weights[i * 785] = 1;
  const auto y = layer_eval(be, FcRows(id), x);
  EXPECT_EQ(decrypt_vector(be, y), img.values);
  EXPECT_EQ(y.level(), 2u);

  FcSpec ones{784, 1, std::vector<std::int64_t>(784, 1), {0}, 0};
  std::int64_t total = 0;
  for (auto v : img.values) total += v;
  EXPECT_EQ(decrypt_vector(be, layer_eval(be, FcRows(ones), x))[0], total);

  const auto small = pack_image(be, Tensor3({1, 1, 3}), 2048);
  Tensor3 t({1, 1, 3});
  t.values = {1, 2, 3};
  FcSpec dot{3, 1, {1, 1, 1}, {0}, 0};
  EXPECT_EQ(decrypt_vector(be, layer_eval(be, FcRows(dot), pack_image(be, t, 2048)))[0], 6);
  EXPECT_THROW(layer_eval(be, FcRows(dot), x), DimensionError);
  (void)small;
}

TEST(LayerEvalTest, ConvMatchesOracle) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(3);
  NetworkSpec net;
  net.input = {1, 28, 28};
  net.layers = {random_conv(rng, net.input, 25, 5, 2)};
  const Tensor3 img = model::random_image(rng, net.input, 8);
  const auto y = layer_eval(be, ConvRows(std::get<ConvSpec>(net.layers[0])), pack_image(be, img, 2048));
  EXPECT_EQ(decrypt_vector(be, y), mod_t(model::plaintext_infer_int(net, img), be.plain_modulus()));
}

TEST(LayerEvalTest, ZeroSegmentSkipAndSchedule) {
  slot::SimBackend be(desk());
  std::mt19937_64 rng(4);
  const ConvSpec c = random_conv(rng, {4, 20, 20}, 6, 3, 1);
  const Tensor3 img = model::random_image(rng, c.input, 4);
  const auto x = pack_image(be, img, 256);  // 1600 values over 7 segments
  auto run = [&](bool skip, std::size_t threads) {
    const auto before = be.cost_report();
    const auto y = layer_eval(be, ConvRows(c), x, {threads, skip});
    return std::pair{decrypt_vector(be, y), be.cost_report() - before};
  };
  const auto [on, on_cost] = run(true, 1);
  const auto [off, off_cost] = run(false, 1);
  EXPECT_EQ(on, off);
  EXPECT_LT(on_cost.cmult_count, off_cost.cmult_count);
  const auto [par, par_cost] = run(true, 4);
  EXPECT_EQ(par, on);
  EXPECT_EQ(par_cost.cmult_count, on_cost.cmult_count);
  EXPECT_EQ(par_cost.add_count, on_cost.add_count);
  EXPECT_EQ(par_cost.rotation_count, on_cost.rotation_count);
  EXPECT_EQ(par_cost.peak_live_ciphertexts, on_cost.peak_live_ciphertexts);
}

TEST(SquareTest, Examples) {
  slot::SimBackend be(desk());
  Tensor3 t({1, 1, 2});
  t.values = {-3, 2};
  const auto sq = square_activation(be, pack_image(be, t, 2048));
  EXPECT_EQ(decrypt_vector(be, sq), (std::vector<std::int64_t>{9, 4}));
  EXPECT_EQ(sq.level(), 1u);
  EXPECT_EQ(decrypt_vector(be, square_activation(be, pack_image(be, Tensor3({1, 3, 3}), 2048))),
            std::vector<std::int64_t>(9, 0));

  std::mt19937_64 rng(5);
  Tensor3 r({1, 40, 40});
  std::uniform_int_distribution<std::int64_t> d(-600000, 600000);
  for (auto& v : r.values) v = d(rng);
  auto x = pack_image(be, r, 700);
  x.scale_bits = 3;
  const auto y = square_activation(be, x);
  std::vector<std::int64_t> expected;
  for (auto v : r.values) expected.push_back(centered_mod(centered_mod(v, be.plain_modulus()) * centered_mod(v, be.plain_modulus()), be.plain_modulus()));
  EXPECT_EQ(decrypt_vector(be, y), expected);
  EXPECT_EQ(y.scale_bits, 6);

  slot::SimBackend tight(desk().with_depth_budget(0));
  EXPECT_THROW(square_activation(tight, pack_image(tight, t, 2048)), BudgetExhausted);
}

TEST(InferTest, ZeroWeightsGiveBiases) {
  slot::SimBackend be(desk());
  NetworkSpec net = table1_network({1, 28, 28});
  std::get<FcSpec>(net.layers[4]).biases = {1, -2, 3, -4, 5, 0, 0, 7, 8, -9};
  const auto y = infer(be, net, pack_image(be, Tensor3({1, 28, 28}, 1), 2048));
  EXPECT_EQ(decrypt_vector(be, y), (std::vector<std::int64_t>{1, -2, 3, -4, 5, 0, 0, 7, 8, -9}));
}

TEST(InferTest, CertifiedRandomNetworksMatchOracle) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 4; ++trial) {
    slot::SimBackend be(desk());
    const int bits = 1 + trial % 2;
    model::CertifiedOptions opts{{}, bits, be.plain_modulus(), 4};
    const NetworkSpec net = model::random_certified_network(rng, {1, 28, 28}, opts);
    const Tensor3 img = model::random_image(rng, net.input, bits);
    const auto y = infer(be, net, pack_image(be, img, 2048));
    EXPECT_EQ(decrypt_vector(be, y), model::plaintext_infer_int(net, img));
    EXPECT_EQ(y.level(), 8u);
    EXPECT_EQ(y.length, 10u);
  }
}

TEST(InferTest, DepthBudget) {
  std::mt19937_64 rng(13);
  const NetworkSpec net = model::random_certified_network(rng, {1, 28, 28}, {{}, 1, 1032193, 4});
  slot::SimBackend seven(desk().with_depth_budget(7));
  EXPECT_THROW(infer(seven, net, pack_image(seven, Tensor3({1, 28, 28}), 2048)), BudgetExhausted);
  slot::SimBackend eight(desk().with_depth_budget(8));
  EXPECT_NO_THROW(infer(eight, net, pack_image(eight, Tensor3({1, 28, 28}), 2048)));
  EXPECT_EQ(eight.cost_report().max_level_used, 8u);
}

TEST(InferTest, FinalLayerScalingKeepsArgmax) {
  slot::SimBackend be(slot::profile("mnist"));
  std::mt19937_64 rng(7);
  model::CertifiedOptions opts{{}, 2, 1032193, 4};
  NetworkSpec net = model::random_certified_network(rng, {1, 28, 28}, opts);
  const Tensor3 img = model::random_image(rng, net.input, 2);
  const auto base = decrypt_vector(be, infer(be, net, pack_image(be, img, 8192)));
  for (std::int64_t k : {2, 3, 7}) {
    NetworkSpec scaled = net;
    auto& fc = std::get<FcSpec>(scaled.layers[4]);
    for (auto& w : fc.weights) w *= k;
    for (auto& b : fc.biases) b *= k;
    const auto logits = decrypt_vector(be, infer(be, scaled, pack_image(be, img, 8192)));
    EXPECT_EQ(argmax(logits), argmax(base));
  }
}

TEST(InferTest, CompactAndInterleavedAgree) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    model::RandomNetworkOptions opts;
    opts.architecture = small_arch();
    opts.density = 0.5;
    opts.weight_bits = 2;
    const NetworkSpec net = model::random_network(rng, kSmall, opts);
    const Tensor3 img = model::random_image(rng, kSmall, 3);
    slot::SimBackend a(desk()), b(desk());
    const auto compact = decrypt_vector(a, infer(a, net, pack_image(a, img, 300)));
    const auto inter = decrypt_interleaved(b, interleaved_infer(b, net, pack_image_interleaved(b, img)));
    EXPECT_EQ(compact, inter);
    EXPECT_EQ(compact, mod_t(model::plaintext_infer_int(net, img), a.plain_modulus()));
  }
}

TEST(InferTest, InterleavedThreadsAgree) {
  std::mt19937_64 rng(9);
  model::RandomNetworkOptions opts;
  opts.architecture = small_arch();
  const NetworkSpec net = model::random_network(rng, kSmall, opts);
  const Tensor3 img = model::random_image(rng, kSmall, 8);
  slot::SimBackend a(desk()), b(desk());
  const auto one = interleaved_infer(a, net, pack_image_interleaved(a, img), {1});
  const auto four = interleaved_infer(b, net, pack_image_interleaved(b, img), {4});
  EXPECT_EQ(decrypt_interleaved(a, one), decrypt_interleaved(b, four));
  EXPECT_EQ(a.cost_report(), b.cost_report());
}

TEST(PlanTest, MatchesMeasuredCounters) {
  std::mt19937_64 rng(10);
  for (Packing packing : {Packing::kCompact, Packing::kInterleaved}) {
    for (double density : {1.0, 0.2}) {
      model::RandomNetworkOptions opts;
      opts.architecture = small_arch();
      opts.density = density;
      opts.bias_bits = density < 1 ? 0 : 2;
      const NetworkSpec net = model::random_network(rng, kSmall, opts);
      const Tensor3 img = model::random_image(rng, kSmall, 8);
      slot::SimBackend be(desk());
      if (packing == Packing::kCompact) {
        infer(be, net, pack_image(be, img, 100));
      } else {
        interleaved_infer(be, net, pack_image_interleaved(be, img));
      }
      const InferencePlan plan = plan_inference(net, packing, desk(), 100);
      EXPECT_EQ(plan.ops, be.cost_report()) << to_string(packing) << " density " << density;
    }
  }
}

TEST(PlanTest, PaperShapeRatios) {
  const slot::BackendParams mnist = slot::profile("mnist");
  const slot::BackendParams retina = slot::profile("retina");
  const PlanOptions sizes{.count_ops = false};
  auto ratio = [&](Shape3 shape, const slot::BackendParams& p) {
    const NetworkSpec net = table1_network(shape, 2);
    const auto c = plan_inference(net, Packing::kCompact, p, p.slot_count, sizes);
    const auto i = plan_inference(net, Packing::kInterleaved, p, p.slot_count, sizes);
    EXPECT_EQ(i.input_cts % c.input_cts, 0u);
    return std::pair{i.input_cts / c.input_cts,
                     static_cast<double>(i.peak_ciphertext_bytes) / static_cast<double>(c.peak_ciphertext_bytes)};
  };
  const auto [mnist_inputs, mnist_bytes] = ratio({1, 28, 28}, mnist);
  EXPECT_EQ(mnist_inputs, 784u);
  EXPECT_GE(mnist_bytes, 5.0);
  const auto [rop_inputs, rop_bytes] = ratio({1, 96, 96}, retina);
  EXPECT_EQ(rop_inputs, 4608u);
  EXPECT_GE(rop_bytes, 40.0);
  EXPECT_EQ(ratio({3, 256, 256}, retina).first, 8192u);

  const auto idrid = plan_inference(table1_network({3, 256, 256}, 2), Packing::kInterleaved, retina, 8192, sizes);
  EXPECT_GT(idrid.estimated_bytes(), 188ull << 30);
}

TEST(PlanTest, InterleavedCapRefusal) {
  // The estimate depends on ring size and modulus only, so a one-slot
  // variant of the retina profile exercises the guard cheaply.
  slot::SimBackend be(narrow("retina", 1));
  const NetworkSpec net = table1_network({3, 256, 256}, 2);
  const auto pixels = pack_image_interleaved(be, Tensor3({3, 256, 256}));
  const auto before = be.cost_report();
  EXPECT_THROW(interleaved_infer(be, net, pixels, {.memory_cap_bytes = 188ull << 30}), CapacityRefusal);
  EXPECT_EQ((be.cost_report() - before).cmult_count, 0u);
}

TEST(FilesTest, EncryptedImageAndLogitsRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "hepack_cnn_files";
  std::filesystem::create_directories(dir);
  slot::SimBackend be(desk());
  std::mt19937_64 rng(11);
  const Tensor3 img = model::random_image(rng, {1, 28, 28}, 8);
  const auto v = pack_image(be, img, 500);
  write_encrypted_image(dir / "img.bin", be, {Packing::kCompact, img.shape, 500, 8, v.cts});
  const EncryptedImage back = read_encrypted_image(dir / "img.bin", be);
  EXPECT_EQ(back.shape, img.shape);
  EXPECT_EQ(back.slots_used, 500u);
  EXPECT_EQ(back.scale_bits, 8);
  hemat::PackedVector pv{784, 500, 8, img.shape, back.cts};
  EXPECT_EQ(decrypt_vector(be, pv), img.values);

  EncryptedLogits logits{3, {{0, 2}, {1, 0}}, {v.cts[0], v.cts[1]}};
  write_logits(dir / "logits.bin", be, logits);
  const auto read = read_logits(dir / "logits.bin", be);
  EXPECT_EQ(decrypt_logits(be, read), (std::vector<std::int64_t>{img.values[2], img.values[500]}));

  slot::SimBackend other(slot::profile("mnist"));
  EXPECT_THROW(read_encrypted_image(dir / "img.bin", other), ParamMismatch);
  auto bytes = read_file_bytes(dir / "img.bin");
  bytes.resize(bytes.size() - 9);
  write_file_bytes(dir / "cut.bin", bytes);
  EXPECT_THROW(read_encrypted_image(dir / "cut.bin", be), FormatError);
  EXPECT_THROW(read_encrypted_image(dir / "missing.bin", be), IoError);
  std::filesystem::remove_all(dir);
}

TEST(FvIntegrationTest, ConvSquareOnRealCiphertexts) {
  fv::FvBackend be(fv::FvParams::desk(), 42);
  std::mt19937_64 rng(12);
  NetworkSpec net;
  net.input = {1, 6, 6};
  ConvSpec c = random_conv(rng, net.input, 2, 3, 2);
  net.layers = {c, SquareSpec{}};
  const Tensor3 img = model::random_image(rng, net.input, 4);
  const auto y = infer(be, net, pack_image(be, img, 64));
  EXPECT_EQ(decrypt_vector(be, y), mod_t(model::plaintext_infer_int(net, img), be.plain_modulus()));
  EXPECT_GT(be.noise_budget(y.cts[0]), 0);
}

}  // namespace
}  // namespace hepack::cnn
