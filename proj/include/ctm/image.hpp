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
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctm/bitvec.hpp"
#include "ctm/errors.hpp"

namespace ctm {

// 8-bit grayscale image, row-major.
struct GrayImage {
  int x = 0;
  int y = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int x_, int y_) : x(x_), y(y_), pixels(static_cast<std::size_t>(x_) * y_, 0) {}

  std::uint8_t at(int px, int py) const { return pixels[static_cast<std::size_t>(py) * x + px]; }
  std::uint8_t& at(int px, int py) { return pixels[static_cast<std::size_t>(py) * x + px]; }
};

// Binary image with Z layers. Bit index = px + X*(py + Y*pz), so a row of one
// layer is contiguous and can be lifted out word-wise.
struct BitImage {
  int x = 0;
  int y = 0;
  int z = 1;
  BitVector bits;

  BitImage() = default;
  BitImage(int x_, int y_, int z_ = 1)
      : x(x_), y(y_), z(z_), bits(static_cast<std::size_t>(x_) * y_ * z_) {}

  std::size_t bit_index(int px, int py, int pz = 0) const {
    return static_cast<std::size_t>(px) + static_cast<std::size_t>(x) * (py + static_cast<std::size_t>(y) * pz);
  }
  bool get(int px, int py, int pz = 0) const { return bits.get(bit_index(px, py, pz)); }
  void set(int px, int py, int pz = 0) { bits.set(bit_index(px, py, pz)); }
  void assign(int px, int py, int pz, bool v) { bits.assign(bit_index(px, py, pz), v); }

  bool operator==(const BitImage&) const = default;
};

// Labeled binary images, all of identical shape.
struct Dataset {
  int image_x = 0;
  int image_y = 0;
  int layers = 1;
  int num_classes = 0;
  std::vector<BitImage> images;
  std::vector<int> labels;

  std::size_t size() const { return images.size(); }

  void validate() const {
    if (images.size() != labels.size())
      throw ParseError("dataset has " + std::to_string(images.size()) + " images but " +
                       std::to_string(labels.size()) + " labels");
    if (num_classes < 1) throw ConfigError("dataset num_classes must be >= 1");
    for (std::size_t i = 0; i < images.size(); ++i) {
      const BitImage& im = images[i];
      if (im.x != image_x || im.y != image_y || im.z != layers)
        throw DimensionError("image " + std::to_string(i) + " has shape " +
                             std::to_string(im.x) + "x" + std::to_string(im.y) + "x" +
                             std::to_string(im.z) + ", dataset expects " +
                             std::to_string(image_x) + "x" + std::to_string(image_y) + "x" +
                             std::to_string(layers));
      if (labels[i] < 0 || labels[i] >= num_classes)
        throw ParseError("label " + std::to_string(labels[i]) + " at index " +
                         std::to_string(i) + " out of range for " +
                         std::to_string(num_classes) + " classes");
    }
  }

  bool operator==(const Dataset&) const = default;
};

}  // namespace ctm
