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
#include <span>
#include <vector>

#include "ctm/automata.hpp"
#include "ctm/bitvec.hpp"
#include "ctm/errors.hpp"
#include "ctm/image.hpp"

namespace ctm {

// Origins of a filter of the given size sliding across one axis: 0, d, 2d,
// ... with the last origin clamped to extent-filter so the final patch stays
// in bounds. Yields exactly ceil((extent-filter)/d)+1 distinct origins.
std::vector<int> patch_origins(int extent, int filter, int stride);

// Thermometer code of a coordinate against ascending thresholds:
// bit t = 1 iff coord <= thresholds[t].
std::vector<std::uint8_t> encode_position(int coord, std::span<const int> thresholds);

// Where a clause filter lands on an image, plus the coordinate encoding that
// makes clauses location-aware. Patch b covers origins
// (origins_x[b % b_x], origins_y[b / b_x]); patches run row-major, Y outer.
struct PatchLayout {
  int image_x = 0;
  int image_y = 0;
  int layers = 1;
  int filter_x = 0;
  int filter_y = 0;
  int stride = 1;
  std::vector<int> origins_x;
  std::vector<int> origins_y;
  // One position variable per origin along each axis. Empty in whole-image
  // layouts, which carry no position information.
  std::vector<int> thresholds_x;
  std::vector<int> thresholds_y;

  static PatchLayout convolution(int image_x, int image_y, int layers,
                                 int filter, int stride);
  static PatchLayout whole_image(int image_x, int image_y, int layers);

  int b_x() const { return static_cast<int>(origins_x.size()); }
  int b_y() const { return static_cast<int>(origins_y.size()); }
  int num_patches() const { return b_x() * b_y(); }
  int pixel_vars() const { return filter_x * filter_y * layers; }
  int num_vars() const {
    return pixel_vars() + static_cast<int>(thresholds_x.size() + thresholds_y.size());
  }
  int origin_x(int b) const { return origins_x[b % b_x()]; }
  int origin_y(int b) const { return origins_y[b / b_x()]; }

  bool operator==(const PatchLayout&) const = default;
};

// Augmented variable vector of patch b: filter pixels row-major (x fastest,
// then y, then layer), then X-axis position bits, then Y-axis position bits.
BitVector extract_patch(const BitImage& image, const PatchLayout& layout, int b);

// All patches of one image as packed literal vectors (2o bits each),
// contiguous for the clause-evaluation loop. Reused across examples.
class PatchLiterals {
 public:
  void build(const BitImage& image, const PatchLayout& layout);

  int vars() const { return o_; }
  int patches() const { return b_; }
  std::size_t words_per_patch() const { return wpp_; }
  const std::uint64_t* patch(int b) const { return words_.data() + static_cast<std::size_t>(b) * wpp_; }

 private:
  int o_ = 0;
  int b_ = 0;
  std::size_t wpp_ = 0;
  std::vector<std::uint64_t> words_;
  BitVector vars_scratch_;
  BitVector lits_scratch_;
};

// Clause output over an image: OR of the per-patch outputs. In Learning mode
// the full matching-patch set is collected (callers pick one patch to learn
// from); in Inference mode the scan stops at the first match.
bool conv_clause_eval(const std::uint64_t* include_mask, int include_count,
                      const PatchLiterals& patches, EvalMode mode,
                      std::vector<std::uint16_t>* matching);

inline bool conv_clause_eval(const TaBank& bank, int j, const PatchLiterals& patches,
                             EvalMode mode, std::vector<std::uint16_t>* matching) {
  return conv_clause_eval(bank.mask(j), bank.include_count(j), patches, mode, matching);
}

// Uniform pick from the matching-patch set; -1 when the set is empty (the
// caller then applies Type Ib only). A singleton consumes no draw.
template <class RngT>
int select_update_patch(std::span<const std::uint16_t> matching, RngT& rng) {
  if (matching.empty()) return -1;
  if (matching.size() == 1) return matching[0];
  return matching[rng.below(static_cast<std::uint32_t>(matching.size()))];
}

}  // namespace ctm
