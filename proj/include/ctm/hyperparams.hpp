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

#include "ctm/errors.hpp"

namespace ctm {

struct Hyperparams {
  int clauses_per_class = 40;   // m, even; half vote for, half against
  int threshold = 50;           // T, vote-sum target
  double specificity = 5.0;     // s, 1/s is the exclude-reinforcement rate
  int states_per_action = 128;  // N; automaton states span 1..2N
  int filter_size = 2;          // W (ignored by flat models)
  int stride = 1;               // d
  int layers = 1;               // Z, binary layers per pixel
  bool weighting = false;       // learn integer clause weights
  int epochs = 100;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (clauses_per_class <= 0 || clauses_per_class % 2 != 0)
      throw ConfigError("clauses_per_class must be a positive even number, got " +
                        std::to_string(clauses_per_class));
    if (threshold < 1) throw ConfigError("threshold must be >= 1");
    if (specificity < 1.0) throw ConfigError("specificity must be >= 1.0");
    if (states_per_action < 1) throw ConfigError("states_per_action must be >= 1");
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (layers < 1) throw ConfigError("layers must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
  }

  // Convolution only: the filter has to fit inside the image.
  void validate_for_image(int image_x, int image_y) const {
    validate();
    if (filter_size < 1 || filter_size > image_x || filter_size > image_y)
      throw ConfigError("filter_size " + std::to_string(filter_size) +
                        " does not fit a " + std::to_string(image_x) + "x" +
                        std::to_string(image_y) + " image");
  }

  bool operator==(const Hyperparams&) const = default;
};

}  // namespace ctm
