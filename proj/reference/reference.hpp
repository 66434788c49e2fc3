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

// Plain serial implementation of clause evaluation, patch geometry and the
// feedback target sets, written directly from their definitions on byte
// vectors. Deliberately independent of the packed production code: tests use
// it as the oracle and the benchmark uses it as the baseline. Keep it naive.

#include <cstdint>
#include <utility>
#include <vector>

namespace ctm::ref {

using Bits = std::vector<std::uint8_t>;  // one 0/1 flag per position

// Filter origins along one axis: 0, stride, 2*stride, ..., last clamped to
// extent-filter.
std::vector<int> patch_origins(int extent, int filter, int stride);

// bit t = 1 iff coord <= thresholds[t].
Bits position_bits(int coord, const std::vector<int>& thresholds);

// Augmented variable vector of patch b on an X*Y*Z bit image (index
// x + X*(y + Y*z)): filter pixels x-fastest then y then z, X-axis position
// bits, Y-axis position bits. Patches run row-major with Y outer.
Bits patch_variables(const Bits& image, int image_x, int image_y, int layers,
                     int filter, int stride, int b);

// Variables followed by their negations.
Bits make_literals(const Bits& vars);

// Conjunction over included literals; empty clause follows the mode rule.
bool clause_eval(const Bits& include, const Bits& literals, bool learning);

// OR over the per-patch outputs plus the matching patch set.
std::pair<bool, std::vector<int>> conv_clause_eval(const Bits& include,
                                                   const Bits& image, int image_x,
                                                   int image_y, int layers,
                                                   int filter, int stride,
                                                   bool learning);

// Weighted vote of one class over an image, inference mode.
long long class_score(const std::vector<Bits>& positive_includes,
                      const std::vector<Bits>& negative_includes,
                      const std::vector<int>& positive_weights,
                      const std::vector<int>& negative_weights, const Bits& image,
                      int image_x, int image_y, int layers, int filter, int stride);

// Feedback target sets as literal set comprehensions over full draw
// matrices. literal_rows[j] is the literal vector the clause j update uses,
// outputs[j] its output, r[j] the selection bit and q[j][k] the per-automaton
// Type Ib bits.
using IndexPairs = std::vector<std::pair<int, int>>;
IndexPairs type_ia_set(const std::vector<Bits>& literal_rows, const Bits& outputs,
                       const Bits& r);
IndexPairs type_ib_set(const std::vector<Bits>& literal_rows, const Bits& outputs,
                       const Bits& r, const std::vector<Bits>& q);
IndexPairs type_ii_set(const std::vector<Bits>& literal_rows, const Bits& outputs,
                       const Bits& r);

}  // namespace ctm::ref
