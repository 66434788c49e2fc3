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
#include <random>

namespace ctm {

// One splitmix64 step. Used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream ids hung off one user-visible seed.
enum class Stream : std::uint64_t {
  ModelInit = 1,
  Trainer = 2,
  Worker = 3,
  XorData = 4,
};

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                 std::uint64_t index = 0) {
  std::uint64_t s = base;
  (void)splitmix64(s);
  s ^= static_cast<std::uint64_t>(stream) * 0xd6e8feb86659fd93ull;
  (void)splitmix64(s);
  s ^= index * 0xa5a5a5a5a5a5a5a5ull;
  return splitmix64(s);
}

// mt19937_64 with hand-rolled draw primitives. The standard pins down the
// engine's output sequence but not the distributions, so all draws used for
// training go through these helpers to keep runs byte-reproducible across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform in [0, n); n > 0. Multiply-shift; bias is O(n / 2^64).
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctm
