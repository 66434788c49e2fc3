#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ctm/convolution.hpp"
#include "doctest.h"
#include "reference.hpp"

using namespace ctm;

namespace {

BitImage random_image(Rng& rng, int x, int y, int z = 1) {
  BitImage im(x, y, z);
  for (std::size_t i = 0; i < im.bits.size(); ++i)
    if (rng.bernoulli(0.5)) im.bits.set(i);
  return im;
}

ref::Bits image_flags(const BitImage& im) {
  ref::Bits out(im.bits.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = im.bits.get(i) ? 1 : 0;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("convolution");

TEST_CASE("patch origins follow the stride with a clamped final origin") {
  CHECK(patch_origins(6, 3, 2) == std::vector<int>{0, 2, 3});
  std::vector<int> expected(19);
  for (int i = 0; i < 19; ++i) expected[static_cast<std::size_t>(i)] = i;
  CHECK(patch_origins(28, 10, 1) == expected);
  CHECK(patch_origins(5, 5, 1) == std::vector<int>{0});
  CHECK(patch_origins(5, 5, 3) == std::vector<int>{0});
  CHECK_THROWS_AS(patch_origins(4, 5, 1), ConfigError);
}

TEST_CASE("origin count equals ceil((X-W)/d)+1 for every small geometry") {
  for (int extent = 1; extent <= 32; ++extent) {
    for (int filter = 1; filter <= extent; ++filter) {
      for (int stride = 1; stride <= 32; ++stride) {
        const auto origins = patch_origins(extent, filter, stride);
        const int span = extent - filter;
        const int expected = (span + stride - 1) / stride + 1;
        REQUIRE(static_cast<int>(origins.size()) == expected);
        REQUIRE(std::is_sorted(origins.begin(), origins.end()));
        REQUIRE(std::adjacent_find(origins.begin(), origins.end()) == origins.end());
        REQUIRE(origins.front() == 0);
        REQUIRE(origins.back() == span);
        // independent naive enumeration agrees
        REQUIRE(origins == ref::patch_origins(extent, filter, stride));
      }
    }
  }
}

TEST_CASE("position encoding against ascending thresholds") {
  const std::vector<int> thresholds{1, 4, 6};
  CHECK(encode_position(1, thresholds) == std::vector<std::uint8_t>{1, 1, 1});
  CHECK(encode_position(4, thresholds) == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(encode_position(6, thresholds) == std::vector<std::uint8_t>{0, 0, 1});
}

TEST_CASE("position encoding is a thermometer: a set bit implies all later bits") {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t want = 1 + rng.below(8);
    std::set<int> unique;
    while (unique.size() < want) unique.insert(static_cast<int>(rng.below(40)));
    const std::vector<int> thresholds(unique.begin(), unique.end());
    const int coord = static_cast<int>(rng.below(45));
    const auto bits = encode_position(coord, thresholds);
    for (std::size_t t = 0; t + 1 < bits.size(); ++t)
      if (bits[t]) CHECK(bits[t + 1]);
  }
}

TEST_CASE("convolution layout counts and variable widths") {
  const PatchLayout mnist = PatchLayout::convolution(28, 28, 1, 10, 1);
  CHECK(mnist.b_x() == 19);
  CHECK(mnist.b_y() == 19);
  CHECK(mnist.num_patches() == 361);
  CHECK(mnist.num_vars() == 10 * 10 * 1 + 19 + 19);  // 138

  const PatchLayout degenerate = PatchLayout::convolution(4, 4, 1, 4, 1);
  CHECK(degenerate.num_patches() == 1);
  CHECK(degenerate.num_vars() == 16 + 1 + 1);

  const PatchLayout flat = PatchLayout::whole_image(4, 4, 1);
  CHECK(flat.num_patches() == 1);
  CHECK(flat.num_vars() == 16);
  CHECK(flat.thresholds_x.empty());
}

TEST_CASE("corner patch copies the upper-left block with all position bits set") {
  Rng rng(3);
  const BitImage im = random_image(rng, 4, 4);
  const PatchLayout layout = PatchLayout::convolution(4, 4, 1, 2, 1);
  const BitVector vars = extract_patch(im, layout, 0);
  REQUIRE(vars.size() == 4 + 3 + 3);
  CHECK(vars.get(0) == im.get(0, 0));
  CHECK(vars.get(1) == im.get(1, 0));
  CHECK(vars.get(2) == im.get(0, 1));
  CHECK(vars.get(3) == im.get(1, 1));
  for (std::size_t t = 4; t < 10; ++t) CHECK(vars.get(t));  // origin 0 <= every threshold
}

TEST_CASE("last patch of a strided layout lands on the clamped origin") {
  BitImage im(6, 6, 1);
  // mark the bottom-right 3x3 block (origin (3,3)) with a distinctive pattern
  for (int py = 0; py < 3; ++py)
    for (int px = 0; px < 3; ++px)
      if ((px + py) % 2 == 0) im.set(3 + px, 3 + py);
  const PatchLayout layout = PatchLayout::convolution(6, 6, 1, 3, 2);
  REQUIRE(layout.num_patches() == 9);
  const BitVector vars = extract_patch(im, layout, 8);
  for (int py = 0; py < 3; ++py)
    for (int px = 0; px < 3; ++px)
      CHECK(vars.get(static_cast<std::size_t>(px + 3 * py)) == ((px + py) % 2 == 0));
  // origin 3 against thresholds {0,2,3}: only the last bit is set
  CHECK_FALSE(vars.get(9));
  CHECK_FALSE(vars.get(10));
  CHECK(vars.get(11));
}

TEST_CASE("extract_patch agrees with the naive index oracle") {
  Rng rng(29);
  for (int trial = 0; trial < 400; ++trial) {
    const int x = 2 + static_cast<int>(rng.below(9));
    const int y = 2 + static_cast<int>(rng.below(9));
    const int z = 1 + static_cast<int>(rng.below(2));
    const int w = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(std::min(x, y))));
    const int d = 1 + static_cast<int>(rng.below(3));
    const BitImage im = random_image(rng, x, y, z);
    const PatchLayout layout = PatchLayout::convolution(x, y, z, w, d);
    const int b = static_cast<int>(rng.below(static_cast<std::uint32_t>(layout.num_patches())));

    const BitVector vars = extract_patch(im, layout, b);
    const ref::Bits naive = ref::patch_variables(image_flags(im), x, y, z, w, d, b);
    REQUIRE(vars.size() == naive.size());
    for (std::size_t i = 0; i < naive.size(); ++i) REQUIRE(vars.get(i) == (naive[i] != 0));
  }
  const PatchLayout layout = PatchLayout::convolution(4, 4, 1, 2, 1);
  BitImage im(4, 4, 1);
  CHECK_THROWS_AS(extract_patch(im, layout, 9), std::out_of_range);
}

TEST_CASE("packed patch literals mirror extract_patch with negations") {
  Rng rng(41);
  const BitImage im = random_image(rng, 6, 5, 1);
  const PatchLayout layout = PatchLayout::convolution(6, 5, 1, 3, 2);
  PatchLiterals patches;
  patches.build(im, layout);
  REQUIRE(patches.patches() == layout.num_patches());
  const int o = layout.num_vars();
  for (int b = 0; b < patches.patches(); ++b) {
    const BitVector vars = extract_patch(im, layout, b);
    const std::uint64_t* words = patches.patch(b);
    for (int k = 0; k < o; ++k) {
      const bool lit = (words[k >> 6] >> (k & 63)) & 1u;
      const bool neg = (words[(o + k) >> 6] >> ((o + k) & 63)) & 1u;
      REQUIRE(lit == vars.get(static_cast<std::size_t>(k)));
      REQUIRE(neg == !lit);
    }
    // tail bits beyond 2o stay zero so covers() sees no phantom literals
    const std::size_t tail = patches.words_per_patch() * 64;
    for (std::size_t k = 2 * static_cast<std::size_t>(o); k < tail; ++k) {
      const bool bit = (words[k >> 6] >> (k & 63)) & 1u;
      REQUIRE_FALSE(bit);
    }
  }
}

TEST_CASE("conv clause output is the OR of per-patch outputs") {
  Rng rng(53);
  int trials = 0;
  while (trials < 10000) {
    const int x = 2 + static_cast<int>(rng.below(7));
    const int y = 2 + static_cast<int>(rng.below(7));
    const int w = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(std::min(x, y))));
    const int d = 1 + static_cast<int>(rng.below(2));
    const BitImage im = random_image(rng, x, y);
    const PatchLayout layout = PatchLayout::convolution(x, y, 1, w, d);
    PatchLiterals patches;
    patches.build(im, layout);

    const int o = layout.num_vars();
    TaBank bank(1, 2 * o, 1);
    ref::Bits include(static_cast<std::size_t>(2 * o), 0);
    for (int k = 0; k < 2 * o; ++k)
      if (rng.bernoulli(0.08)) {
        bank.set_state(0, k, 2);
        include[static_cast<std::size_t>(k)] = 1;
      }
    const bool learning = rng.bernoulli(0.5);

    std::vector<std::uint16_t> matching;
    const bool out = conv_clause_eval(bank, 0, patches,
                                      learning ? EvalMode::Learning : EvalMode::Inference,
                                      learning ? &matching : nullptr);
    const auto [expected, expected_matching] = ref::conv_clause_eval(
        include, image_flags(im), x, y, 1, w, d, learning);
    REQUIRE(out == expected);
    if (learning) {
      std::vector<int> got(matching.begin(), matching.end());
      REQUIRE(got == expected_matching);
    }
    ++trials;
  }
}

TEST_CASE("clause matching no patch returns an empty set") {
  const PatchLayout layout = PatchLayout::convolution(4, 4, 1, 2, 1);
  BitImage im(4, 4, 1);  // all zeros
  PatchLiterals patches;
  patches.build(im, layout);
  TaBank bank(1, 2 * layout.num_vars(), 1);
  bank.set_state(0, 0, 2);  // require pixel (0,0) set
  std::vector<std::uint16_t> matching;
  CHECK_FALSE(conv_clause_eval(bank, 0, patches, EvalMode::Learning, &matching));
  CHECK(matching.empty());
}

TEST_CASE("every pixel is covered by some patch when stride <= filter") {
  for (int x = 2; x <= 12; ++x) {
    for (int w = 1; w <= x; ++w) {
      for (int d = 1; d <= w; ++d) {
        const auto origins = patch_origins(x, w, d);
        std::vector<bool> covered(static_cast<std::size_t>(x), false);
        for (int o : origins)
          for (int p = o; p < o + w; ++p) covered[static_cast<std::size_t>(p)] = true;
        CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
      }
    }
  }
}

TEST_CASE("update patch selection: empty, singleton, uniform") {
  Rng rng(61);
  const std::vector<std::uint16_t> none{};
  CHECK(select_update_patch(std::span<const std::uint16_t>(none), rng) == -1);

  // a singleton is returned without consuming a draw
  const std::vector<std::uint16_t> one{5};
  Rng probe(61);
  CHECK(select_update_patch(std::span<const std::uint16_t>(one), probe) == 5);
  CHECK(probe.next() == Rng(61).next());

  const std::vector<std::uint16_t> four{1, 2, 3, 4};
  std::vector<int> counts(5, 0);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i)
    ++counts[static_cast<std::size_t>(
        select_update_patch(std::span<const std::uint16_t>(four), rng))];
  const double p = 0.25;
  const double se = std::sqrt(p * (1 - p) / draws);
  for (int v = 1; v <= 4; ++v) {
    const double freq = static_cast<double>(counts[static_cast<std::size_t>(v)]) / draws;
    CHECK(std::abs(freq - p) <= 3 * se);
  }
}

TEST_SUITE_END();
