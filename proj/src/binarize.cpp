/* Copyright 2026 The CTM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "ctm/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ctm/errors.hpp"
#include "ctm/rng.hpp"

namespace ctm {

std::vector<double> gaussian_kernel(int window) {
  const int half = window / 2;
  const double sigma = 0.3 * ((window - 1) * 0.5 - 1.0) + 0.8;
  std::vector<double> kernel(static_cast<std::size_t>(window));
  double sum = 0.0;
  for (int i = 0; i < window; ++i) {
    const double d = i - half;
    kernel[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += kernel[static_cast<std::size_t>(i)];
  }
  for (double& k : kernel) k /= sum;
  return kernel;
}

BitImage adaptive_gaussian_binarize(const GrayImage& image, int window, int c) {
  if (window < 3 || window % 2 == 0)
    throw ConfigError("binarization window must be odd and >= 3, got " +
                      std::to_string(window));
  if (image.x < 1 || image.y < 1) throw ConfigError("empty image");

  const std::vector<double> kernel = gaussian_kernel(window);
  const int half = window / 2;
  const int w = image.x;
  const int h = image.y;

  // Separable passes; the clamped index replicates the edge pixel, which
  // matches a 2-D replicate border exactly because the clamp is per-axis.
  std::vector<double> rows(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = 0; i < window; ++i) {
        const int sx = std::clamp(x + i - half, 0, w - 1);
        acc += kernel[static_cast<std::size_t>(i)] * image.at(sx, y);
      }
      rows[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }

  BitImage out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mean = 0.0;
      for (int i = 0; i < window; ++i) {
        const int sy = std::clamp(y + i - half, 0, h - 1);
        mean += kernel[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(sy) * w + x];
      }
      if (image.at(x, y) > mean - c) out.set(x, y);
    }
  }
  return out;
}

std::optional<int> xor_patch_class(bool p00, bool p01, bool p10, bool p11) {
  const int code = (p00 << 3) | (p01 << 2) | (p10 << 1) | static_cast<int>(p11);
  switch (code) {
    case 0b1001:  // main diagonal
    case 0b0110:  // anti-diagonal
      return 1;
    case 0b1100:  // top row
    case 0b0011:  // bottom row
    case 0b1010:  // left column
    case 0b0101:  // right column
      return 0;
    default:
      return std::nullopt;
  }
}

namespace {

constexpr int kXorSide = 4;
// Upper-right 2x2 patch: rows 0..1, columns 2..3.
constexpr int kPatchX = 2;
constexpr int kPatchY = 0;

// The class-1 and class-0 patch patterns, row-major (p00,p01,p10,p11).
constexpr std::uint8_t kDiagonal[2][4] = {{1, 0, 0, 1}, {0, 1, 1, 0}};
constexpr std::uint8_t kLine[4][4] = {
    {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}};

// Draw order per example: class coin, pattern pick, then one 16-bit word of
// background noise (row-major) whose patch cells get overwritten.
void fill_example(Rng& rng, BitImage& image, int& label) {
  const int cls = rng.bernoulli(0.5) ? 1 : 0;
  const std::uint8_t* pattern =
      cls == 1 ? kDiagonal[rng.below(2)] : kLine[rng.below(4)];
  const std::uint64_t noise = rng.next();
  image = BitImage(kXorSide, kXorSide, 1);
  for (int y = 0; y < kXorSide; ++y)
    for (int x = 0; x < kXorSide; ++x)
      image.assign(x, y, 0, (noise >> (y * kXorSide + x)) & 1u);
  image.assign(kPatchX + 0, kPatchY + 0, 0, pattern[0]);
  image.assign(kPatchX + 1, kPatchY + 0, 0, pattern[1]);
  image.assign(kPatchX + 0, kPatchY + 1, 0, pattern[2]);
  image.assign(kPatchX + 1, kPatchY + 1, 0, pattern[3]);
  label = cls;
}

Dataset make_split(Rng& rng, int n) {
  Dataset d;
  d.image_x = kXorSide;
  d.image_y = kXorSide;
  d.layers = 1;
  d.num_classes = 2;
  d.images.resize(static_cast<std::size_t>(n));
  d.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) fill_example(rng, d.images[static_cast<std::size_t>(i)], d.labels[static_cast<std::size_t>(i)]);
  return d;
}

}  // namespace

XorData generate_noisy_xor(int n_train, int n_test, double noise_rate,
                           std::uint64_t seed) {
  if (n_train < 0 || n_test < 0) throw ConfigError("negative dataset size");
  if (noise_rate < 0.0 || noise_rate > 1.0)
    throw ConfigError("noise_rate must lie in [0,1]");

  Rng rng(derive_seed(seed, Stream::XorData));
  XorData data;
  data.train = make_split(rng, n_train);
  data.test = make_split(rng, n_test);

  // Flip exactly round(noise_rate*n_train) training labels, chosen by a
  // partial shuffle.
  const int flips = static_cast<int>(std::llround(noise_rate * n_train));
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(n_train));
  std::iota(idx.begin(), idx.end(), 0u);
  for (int i = 0; i < flips; ++i) {
    const std::uint32_t j =
        i + rng.below(static_cast<std::uint32_t>(n_train - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    data.train.labels[idx[static_cast<std::size_t>(i)]] ^= 1;
  }
  return data;
}

}  // namespace ctm
