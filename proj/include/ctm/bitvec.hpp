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

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstring>
#include <vector>

namespace ctm {

// Fixed-size bit vector packed into 64-bit words, bit i lives in
// word i/64 at position i%64. Bits past size() are kept zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits)
      : nbits_(bits), words_(word_count(bits), 0) {}

  static constexpr std::size_t word_count(std::size_t bits) {
    return (bits + 63) / 64;
  }

  std::size_t size() const { return nbits_; }
  std::size_t words() const { return words_.size(); }

  void resize(std::size_t bits) {
    nbits_ = bits;
    words_.assign(word_count(bits), 0);
  }

  void reset() { std::fill(words_.begin(), words_.end(), 0); }

  bool get(std::size_t i) const {
    assert(i < nbits_);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  void clear(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  void assign(std::size_t i, bool v) { v ? set(i) : clear(i); }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool none() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  const std::uint64_t* data() const { return words_.data(); }
  std::uint64_t* data() { return words_.data(); }
  std::uint64_t word(std::size_t w) const { return words_[w]; }

  // Reads n bits (1..64) starting at pos.
  std::uint64_t extract(std::size_t pos, unsigned n) const {
    assert(n >= 1 && n <= 64 && pos + n <= nbits_);
    const std::size_t w = pos >> 6;
    const unsigned off = static_cast<unsigned>(pos & 63);
    std::uint64_t bits = words_[w] >> off;
    if (off + n > 64) bits |= words_[w + 1] << (64 - off);
    return bits & tail_mask(n);
  }

  // ORs n bits (1..64) into the vector starting at pos. The target range is
  // expected to be zero; builders reset() first.
  void deposit(std::size_t pos, std::uint64_t bits, unsigned n) {
    assert(n >= 1 && n <= 64 && pos + n <= nbits_);
    bits &= tail_mask(n);
    const std::size_t w = pos >> 6;
    const unsigned off = static_cast<unsigned>(pos & 63);
    words_[w] |= bits << off;
    if (off + n > 64) words_[w + 1] |= bits >> (64 - off);
  }

  // Copies (or bitwise-negates) n bits from src[src_pos..] into this[dst..].
  void blit_from(std::size_t dst, const BitVector& src, std::size_t src_pos,
                 std::size_t n, bool invert = false) {
    while (n > 0) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(n, 64));
      std::uint64_t bits = src.extract(src_pos, chunk);
      if (invert) bits = ~bits;
      deposit(dst, bits, chunk);
      dst += chunk;
      src_pos += chunk;
      n -= chunk;
    }
  }

  bool operator==(const BitVector&) const = default;

 private:
  static constexpr std::uint64_t tail_mask(unsigned n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// True iff every set bit of mask is set in bits ("all included literals
// are 1"). The clause evaluation kernel.
inline bool covers(const std::uint64_t* bits, const std::uint64_t* mask,
                   std::size_t nwords) {
  for (std::size_t w = 0; w < nwords; ++w)
    if (mask[w] & ~bits[w]) return false;
  return true;
}

}  // namespace ctm
