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
#include <optional>
#include <vector>

#include "ctm/image.hpp"

namespace ctm {

// Normalized 1-D Gaussian with sigma = 0.3*((window-1)/2 - 1) + 0.8, the
// conventional kernel for adaptive thresholding at this window size.
std::vector<double> gaussian_kernel(int window);

// bit(x,y) = 1 iff intensity(x,y) > gaussian_mean(window neighborhood) - c.
// Borders replicate the nearest edge pixel. window must be odd and >= 3.
BitImage adaptive_gaussian_binarize(const GrayImage& image, int window, int c);

// Classifies a 2x2 patch read row-major: the two diagonal patterns are class
// 1, the four straight-line patterns class 0, anything else is not a valid
// generator pattern.
std::optional<int> xor_patch_class(bool p00, bool p01, bool p10, bool p11);

struct XorData {
  Dataset train;
  Dataset test;
};

// 4x4 binary images whose upper-right 2x2 patch encodes the class; every
// other bit is uniform noise. A fraction noise_rate of the *training* labels
// (exactly round(noise_rate*n_train) of them) is flipped; test labels stay
// clean. Same seed, same bytes.
XorData generate_noisy_xor(int n_train, int n_test, double noise_rate,
                           std::uint64_t seed);

}  // namespace ctm
