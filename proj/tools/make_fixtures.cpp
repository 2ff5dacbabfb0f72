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

// Writes the pinned fixture models and images used by the tests:
//
//   hepack-fixtures <directory>
//
// Output is a pure function of the seeds below.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "hepack/common/binary_io.hpp"
#include "hepack/model/generate.hpp"
#include "hepack/model/image_io.hpp"
#include "hepack/model/model_file.hpp"
#include "hepack/model/oracle.hpp"
#include "hepack/model/range.hpp"
#include "hepack/slot/params.hpp"

namespace {

using hepack::Shape3;
using hepack::Tensor3;
namespace model = hepack::model;

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double t = std::clamp(((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
  return std::hypot(px - ax - t * dx, py - ay - t * dy);
}

std::int64_t ink(double distance, double width, std::int64_t max) {
  const double v = std::clamp(width + 0.5 - distance, 0.0, 1.0);
  return static_cast<std::int64_t>(std::lround(v * static_cast<double>(max)));
}

// A handwritten-looking 7.
Tensor3 digit_seven() {
  Tensor3 img({1, 28, 28});
  for (std::size_t y = 0; y < 28; ++y) {
    for (std::size_t x = 0; x < 28; ++x) {
      const double px = static_cast<double>(x), py = static_cast<double>(y);
      const double d = std::min(segment_distance(px, py, 6, 6, 21, 7), segment_distance(px, py, 21, 7, 12, 23));
      img.at(0, y, x) = ink(d, 1.2, 255);
    }
  }
  return img;
}

// Dark background, a bright ridge and a few curved vessels.
Tensor3 rop_image() {
  Tensor3 img({1, 96, 96});
  for (std::size_t y = 0; y < 96; ++y) {
    for (std::size_t x = 0; x < 96; ++x) {
      const double px = static_cast<double>(x), py = static_cast<double>(y);
      double v = 60 + 40 * std::exp(-std::hypot(px - 30, py - 48) / 30);
      for (int k = 0; k < 4; ++k) {
        const double centre = 20 + 18 * k + 6 * std::sin(px / (9.0 + k));
        v += 90 * std::exp(-std::pow(py - centre, 2) / 3.0) * (px > 25 ? 1.0 : 0.3);
      }
      if (std::fabs(px - 70 - 4 * std::sin(py / 12)) < 2) v += 70;
      img.at(0, y, x) = std::clamp<std::int64_t>(std::lround(v), 0, 255);
    }
  }
  return img;
}

// Colour fundus: orange disc, bright optic disc, dark branching vessels.
Tensor3 fundus_image() {
  Tensor3 img({3, 256, 256});
  const double base[3] = {200, 90, 40};
  for (std::size_t y = 0; y < 256; ++y) {
    for (std::size_t x = 0; x < 256; ++x) {
      const double px = static_cast<double>(x), py = static_cast<double>(y);
      const double r = std::hypot(px - 128, py - 128);
      const double disc = std::exp(-std::pow(std::hypot(px - 180, py - 120) / 14, 2));
      double vessel = 0;
      for (int k = 0; k < 5; ++k) {
        const double angle = 2.2 + 0.45 * k;
        const double ex = 180 + 150 * std::cos(angle), ey = 120 + 150 * std::sin(angle);
        vessel = std::max(vessel, std::exp(-std::pow(segment_distance(px, py, 180, 120, ex, ey) / 1.8, 2)));
      }
      for (int c = 0; c < 3; ++c) {
        double v = r < 120 ? base[c] * (1 - 0.35 * r / 120) : 0;
        v += disc * (255 - v) * 0.9;
        v *= 1 - 0.6 * vessel * (r < 120 ? 1 : 0);
        img.at(static_cast<std::size_t>(c), y, x) = std::clamp<std::int64_t>(std::lround(v), 0, 255);
      }
    }
  }
  return img;
}

struct Fixture {
  std::string name;
  std::string image;
  Shape3 input;
  std::size_t classes;
  int input_bits;
  std::string profile;
  std::uint64_t seed;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hepack-fixtures <directory>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  model::write_pnm(dir / "digit.pgm", digit_seven(), 255);
  model::write_pnm(dir / "rop.pgm", rop_image(), 255);
  model::write_pnm(dir / "idrid.ppm", fundus_image(), 255);

  const Fixture fixtures[] = {
      {"mnist", "digit.pgm", {1, 28, 28}, 10, 1, "desk", 20261},
      {"rop", "rop.pgm", {1, 96, 96}, 2, 1, "desk", 20262},
      {"idrid", "idrid.ppm", {3, 256, 256}, 2, 8, "retina", 20263},
  };
  for (const Fixture& f : fixtures) {
    const std::uint64_t t = hepack::slot::profile(f.profile).plain_modulus;
    std::mt19937_64 rng(f.seed);
    model::CertifiedOptions opts;
    opts.architecture.classes = f.classes;
    opts.input_bits = f.input_bits;
    opts.plain_modulus = t;
    const model::IntegerModel net = model::random_certified_network(rng, f.input, opts);
    const auto path = dir / (f.name + ".json");
    model::save_model(path, net);

    const Tensor3 img = model::load_quantized_image(dir / f.image, f.input_bits);
    const std::vector<std::int64_t> logits = model::plaintext_infer_int(net, img);
    std::cout << f.name << ": fnv1a64 " << std::hex << hepack::fnv1a64(hepack::read_file_text(path)) << std::dec
              << ", certified for t = " << t << " at " << f.input_bits << " bits: "
              << (model::range_check(net, f.input_bits, t).pass ? "pass" : "FAIL") << "\n  logits";
    for (auto v : logits) std::cout << ' ' << v;
    std::cout << "\n";
  }
  return 0;
}
