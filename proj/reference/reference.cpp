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
#include "reference.hpp"

#include <algorithm>
#include <cassert>

namespace ctm::ref {

std::vector<int> patch_origins(int extent, int filter, int stride) {
  assert(filter >= 1 && filter <= extent && stride >= 1);
  const int span = extent - filter;
  std::vector<int> origins{0};
  int pos = 0;
  while (pos < span) {
    pos = std::min(pos + stride, span);
    origins.push_back(pos);
  }
  return origins;
}

Bits position_bits(int coord, const std::vector<int>& thresholds) {
  Bits bits(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t)
    bits[t] = coord <= thresholds[t] ? 1 : 0;
  return bits;
}

Bits patch_variables(const Bits& image, int image_x, int image_y, int layers,
                     int filter, int stride, int b) {
  const std::vector<int> ox = patch_origins(image_x, filter, stride);
  const std::vector<int> oy = patch_origins(image_y, filter, stride);
  const int bx = static_cast<int>(ox.size());
  const int origin_x = ox[static_cast<std::size_t>(b % bx)];
  const int origin_y = oy[static_cast<std::size_t>(b / bx)];

  Bits vars;
  for (int z = 0; z < layers; ++z)
    for (int py = 0; py < filter; ++py)
      for (int px = 0; px < filter; ++px)
        vars.push_back(image[static_cast<std::size_t>(origin_x + px) +
                             static_cast<std::size_t>(image_x) *
                                 ((origin_y + py) +
                                  static_cast<std::size_t>(image_y) * z)]);
  for (const Bits& pb : {position_bits(origin_x, ox), position_bits(origin_y, oy)})
    vars.insert(vars.end(), pb.begin(), pb.end());
  return vars;
}

Bits make_literals(const Bits& vars) {
  Bits lits(vars.size() * 2);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    lits[k] = vars[k];
    lits[vars.size() + k] = vars[k] ? 0 : 1;
  }
  return lits;
}

bool clause_eval(const Bits& include, const Bits& literals, bool learning) {
  bool empty = true;
  for (std::size_t k = 0; k < include.size(); ++k) {
    if (!include[k]) continue;
    empty = false;
    if (!literals[k]) return false;
  }
  return empty ? learning : true;
}

std::pair<bool, std::vector<int>> conv_clause_eval(const Bits& include,
                                                   const Bits& image, int image_x,
                                                   int image_y, int layers,
                                                   int filter, int stride,
                                                   bool learning) {
  const int bx = static_cast<int>(patch_origins(image_x, filter, stride).size());
  const int by = static_cast<int>(patch_origins(image_y, filter, stride).size());
  std::vector<int> matching;
  for (int b = 0; b < bx * by; ++b) {
    const Bits lits = make_literals(
        patch_variables(image, image_x, image_y, layers, filter, stride, b));
    if (clause_eval(include, lits, learning)) matching.push_back(b);
  }
  return {!matching.empty(), matching};
}

long long class_score(const std::vector<Bits>& positive_includes,
                      const std::vector<Bits>& negative_includes,
                      const std::vector<int>& positive_weights,
                      const std::vector<int>& negative_weights, const Bits& image,
                      int image_x, int image_y, int layers, int filter, int stride) {
  long long v = 0;
  for (std::size_t j = 0; j < positive_includes.size(); ++j)
    if (conv_clause_eval(positive_includes[j], image, image_x, image_y, layers,
                         filter, stride, false)
            .first)
      v += positive_weights[j];
  for (std::size_t j = 0; j < negative_includes.size(); ++j)
    if (conv_clause_eval(negative_includes[j], image, image_x, image_y, layers,
                         filter, stride, false)
            .first)
      v -= negative_weights[j];
  return v;
}

IndexPairs type_ia_set(const std::vector<Bits>& literal_rows, const Bits& outputs,
                       const Bits& r) {
  IndexPairs set;
  for (std::size_t j = 0; j < literal_rows.size(); ++j)
    for (std::size_t k = 0; k < literal_rows[j].size(); ++k)
      if (literal_rows[j][k] && outputs[j] && r[j])
        set.emplace_back(static_cast<int>(j), static_cast<int>(k));
  return set;
}

IndexPairs type_ib_set(const std::vector<Bits>& literal_rows, const Bits& outputs,
                       const Bits& r, const std::vector<Bits>& q) {
  IndexPairs set;
  for (std::size_t j = 0; j < literal_rows.size(); ++j)
    for (std::size_t k = 0; k < literal_rows[j].size(); ++k)
      if ((!literal_rows[j][k] || !outputs[j]) && r[j] && q[j][k])
        set.emplace_back(static_cast<int>(j), static_cast<int>(k));
  return set;
}

IndexPairs type_ii_set(const std::vector<Bits>& literal_rows, const Bits& outputs,
                       const Bits& r) {
  IndexPairs set;
  for (std::size_t j = 0; j < literal_rows.size(); ++j)
    for (std::size_t k = 0; k < literal_rows[j].size(); ++k)
      if (!literal_rows[j][k] && outputs[j] && r[j])
        set.emplace_back(static_cast<int>(j), static_cast<int>(k));
  return set;
}

}  // namespace ctm::ref
