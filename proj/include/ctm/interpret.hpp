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
#include <iosfwd>
#include <string>
#include <vector>

#include "ctm/classifier.hpp"

namespace ctm {

// Half-open origin interval (low, high], 0-based coordinates. An empty
// interval (low >= high is possible for contradictory clauses) matches no
// origin.
struct CoordRange {
  int low = -1;
  int high = 0;

  bool contains(int origin) const { return origin > low && origin <= high; }
};

// A clause rendered as a filter grid plus the origin window where it can
// fire. Grid cells: '1' the pixel must be set, '0' it must be clear, '*'
// unconstrained, 'X' both literals included (the clause can never fire on
// that cell).
struct ClausePattern {
  int class_index = 0;
  int polarity = +1;
  int clause_index = 0;
  std::int32_t weight = 1;
  int filter_x = 0;
  int filter_y = 0;
  int layers = 1;
  std::vector<std::string> rows;  // layers*filter_y strings of filter_x chars
  CoordRange x_range;
  CoordRange y_range;

  char cell(int px, int py, int pz = 0) const {
    return rows[static_cast<std::size_t>(pz) * filter_y + py][static_cast<std::size_t>(px)];
  }
};

ClausePattern clause_to_pattern(const MulticlassModel& model, int class_index,
                                int polarity, int clause_index);

// Inverse of the grid rendering: the pixel literal indexes (positive
// 0..pix-1, negated pix_offset..) a grid encodes. Together with
// clause_to_pattern this is a lossless view of the pixel literals.
std::vector<int> pattern_pixel_literals(const ClausePattern& pattern, int num_vars);

// Grid lines followed by one interval line per axis, coordinates shown
// 1-based in the "low < X <= high" style.
std::string render_pattern(const ClausePattern& pattern);

// Writes the top_k highest-weight clauses per class and polarity with their
// grids, origin windows, weights and (when a dataset is supplied) firing
// rates. Returns the number of clause entries written.
int export_report(const MulticlassModel& model, const Dataset* firing_data,
                  int top_k, std::ostream& out);
int export_report(const MulticlassModel& model, const Dataset* firing_data,
                  int top_k, const std::string& path);

}  // namespace ctm
