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
#include "ctm/convolution.hpp"

#include <cstring>
#include <string>

namespace ctm {

std::vector<int> patch_origins(int extent, int filter, int stride) {
  if (filter < 1 || filter > extent)
    throw ConfigError("filter " + std::to_string(filter) + " does not fit extent " +
                      std::to_string(extent));
  if (stride < 1) throw ConfigError("stride must be >= 1");
  const int span = extent - filter;
  const int count = span == 0 ? 1 : (span + stride - 1) / stride + 1;
  std::vector<int> origins(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) origins[i] = std::min(i * stride, span);
  return origins;
}

std::vector<std::uint8_t> encode_position(int coord, std::span<const int> thresholds) {
  std::vector<std::uint8_t> bits(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t)
    bits[t] = coord <= thresholds[t] ? 1 : 0;
  return bits;
}

PatchLayout PatchLayout::convolution(int image_x, int image_y, int layers,
                                     int filter, int stride) {
  PatchLayout layout;
  layout.image_x = image_x;
  layout.image_y = image_y;
  layout.layers = layers;
  layout.filter_x = filter;
  layout.filter_y = filter;
  layout.stride = stride;
  layout.origins_x = patch_origins(image_x, filter, stride);
  layout.origins_y = patch_origins(image_y, filter, stride);
  layout.thresholds_x = layout.origins_x;
  layout.thresholds_y = layout.origins_y;
  return layout;
}

PatchLayout PatchLayout::whole_image(int image_x, int image_y, int layers) {
  PatchLayout layout;
  layout.image_x = image_x;
  layout.image_y = image_y;
  layout.layers = layers;
  layout.filter_x = image_x;
  layout.filter_y = image_y;
  layout.stride = 1;
  layout.origins_x = {0};
  layout.origins_y = {0};
  return layout;
}

namespace {

void build_patch_vars(const BitImage& image, const PatchLayout& layout, int b,
                      BitVector& out) {
  out.reset();
  const int ox = layout.origin_x(b);
  const int oy = layout.origin_y(b);
  std::size_t v = 0;
  for (int pz = 0; pz < layout.layers; ++pz) {
    for (int py = 0; py < layout.filter_y; ++py) {
      out.blit_from(v, image.bits, image.bit_index(ox, oy + py, pz),
                    static_cast<std::size_t>(layout.filter_x));
      v += static_cast<std::size_t>(layout.filter_x);
    }
  }
  for (int t : layout.thresholds_x) {
    if (ox <= t) out.set(v);
    ++v;
  }
  for (int t : layout.thresholds_y) {
    if (oy <= t) out.set(v);
    ++v;
  }
}

}  // namespace

BitVector extract_patch(const BitImage& image, const PatchLayout& layout, int b) {
  if (b < 0 || b >= layout.num_patches())
    throw std::out_of_range("patch index " + std::to_string(b) + " outside 0.." +
                            std::to_string(layout.num_patches() - 1));
  if (image.x != layout.image_x || image.y != layout.image_y || image.z != layout.layers)
    throw DimensionError("image shape does not match layout");
  BitVector vars(static_cast<std::size_t>(layout.num_vars()));
  build_patch_vars(image, layout, b, vars);
  return vars;
}

void PatchLiterals::build(const BitImage& image, const PatchLayout& layout) {
  if (image.x != layout.image_x || image.y != layout.image_y || image.z != layout.layers)
    throw DimensionError("image shape does not match layout");
  o_ = layout.num_vars();
  b_ = layout.num_patches();
  wpp_ = BitVector::word_count(2 * static_cast<std::size_t>(o_));
  words_.assign(static_cast<std::size_t>(b_) * wpp_, 0);
  if (vars_scratch_.size() != static_cast<std::size_t>(o_))
    vars_scratch_.resize(static_cast<std::size_t>(o_));
  if (lits_scratch_.size() != 2 * static_cast<std::size_t>(o_))
    lits_scratch_.resize(2 * static_cast<std::size_t>(o_));
  for (int b = 0; b < b_; ++b) {
    build_patch_vars(image, layout, b, vars_scratch_);
    lits_scratch_.reset();
    lits_scratch_.blit_from(0, vars_scratch_, 0, static_cast<std::size_t>(o_));
    lits_scratch_.blit_from(static_cast<std::size_t>(o_), vars_scratch_, 0,
                            static_cast<std::size_t>(o_), /*invert=*/true);
    std::memcpy(words_.data() + static_cast<std::size_t>(b) * wpp_, lits_scratch_.data(),
                wpp_ * sizeof(std::uint64_t));
  }
}

bool conv_clause_eval(const std::uint64_t* include_mask, int include_count,
                      const PatchLiterals& patches, EvalMode mode,
                      std::vector<std::uint16_t>* matching) {
  const int b = patches.patches();
  if (include_count == 0) {
    if (mode == EvalMode::Inference) return false;
    if (matching) {
      matching->resize(static_cast<std::size_t>(b));
      for (int i = 0; i < b; ++i) (*matching)[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i);
    }
    return true;
  }
  const std::size_t nwords = patches.words_per_patch();
  bool any = false;
  for (int i = 0; i < b; ++i) {
    if (covers(patches.patch(i), include_mask, nwords)) {
      if (mode == EvalMode::Inference) return true;
      any = true;
      if (matching) matching->push_back(static_cast<std::uint16_t>(i));
    }
  }
  return any;
}

}  // namespace ctm
