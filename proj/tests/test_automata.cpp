#include <algorithm>
#include <vector>

#include "ctm/automata.hpp"
#include "doctest.h"
#include "reference.hpp"

using namespace ctm;

namespace {

BitVector random_bits(Rng& rng, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.bernoulli(0.5)) v.set(i);
  return v;
}

ref::Bits to_flags(const BitVector& v) {
  ref::Bits out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.get(i) ? 1 : 0;
  return out;
}

// Literal vector for variable assignment x, o variables.
LiteralVector make_lits(const std::vector<int>& x) {
  BitVector vars(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) vars.set(i);
  return LiteralVector::from_variables(vars);
}

}  // namespace

TEST_SUITE_BEGIN("automata");

TEST_CASE("ta_action splits the state space at N") {
  CHECK(ta_action(4, 3) == TaAction::Include);
  CHECK(ta_action(3, 3) == TaAction::Exclude);
  CHECK(ta_action(1, 1) == TaAction::Exclude);
  CHECK(ta_action(2, 1) == TaAction::Include);
  CHECK_THROWS_AS(ta_action(0, 3), std::out_of_range);
  CHECK_THROWS_AS(ta_action(7, 3), std::out_of_range);
}

TEST_CASE("included_literals lists states above N") {
  TaBank bank(1, 4, 3);
  CHECK(bank.included_literals(0).empty());  // all states start at N

  // x1 included (state 4), x2 excluded (state 3), and the negation of x2
  // included: the clause x1 AND NOT x2.
  bank.set_state(0, 0, 4);
  bank.set_state(0, 1, 3);
  bank.set_state(0, 2, 1);
  bank.set_state(0, 3, 5);
  CHECK(bank.included_literals(0) == std::vector<int>{0, 3});
  CHECK(bank.include_count(0) == 2);
  CHECK_THROWS_AS(bank.included_literals(2), std::out_of_range);
}

TEST_CASE("included_literals matches a per-element scan on random banks") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3;
    TaBank bank(2, 8, n);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 8; ++k)
        bank.set_state(j, k, static_cast<std::int16_t>(1 + rng.below(2 * n)));
    for (int j = 0; j < 2; ++j) {
      std::vector<int> naive;
      for (int k = 0; k < 8; ++k)
        if (bank.state(j, k) > n) naive.push_back(k);
      CHECK(bank.included_literals(j) == naive);
      CHECK(bank.include_count(j) == static_cast<int>(naive.size()));
    }
  }
}

TEST_CASE("clause_eval on the two-variable example") {
  const LiteralVector lits = make_lits({1, 0});  // literals (1,0,0,1)
  const std::vector<int> first{0, 3};            // x1 AND NOT x2
  const std::vector<int> second{0, 1};           // x1 AND x2
  CHECK(clause_eval(first, lits, EvalMode::Inference));
  CHECK_FALSE(clause_eval(second, lits, EvalMode::Inference));
}

TEST_CASE("empty clause follows the mode rule") {
  const LiteralVector lits = make_lits({1, 0});
  const std::vector<int> empty{};
  CHECK_FALSE(clause_eval(empty, lits, EvalMode::Inference));
  CHECK(clause_eval(empty, lits, EvalMode::Learning));

  TaBank bank(1, 4, 3);
  CHECK(bank.clause_empty(0));
  CHECK_FALSE(clause_eval(bank, 0, lits, EvalMode::Inference));
  CHECK(clause_eval(bank, 0, lits, EvalMode::Learning));
}

TEST_CASE("state updates move by one and saturate") {
  TaBank bank(1, 2, 3);
  bank.set_state(0, 0, 4);
  bank.inc(0, 0);
  CHECK(bank.state(0, 0) == 5);
  bank.dec(0, 0);
  bank.dec(0, 0);
  CHECK(bank.state(0, 0) == 3);

  bank.set_state(0, 1, 6);
  bank.inc(0, 1);
  CHECK(bank.state(0, 1) == 6);  // ceiling 2N
  bank.set_state(0, 1, 1);
  bank.dec(0, 1);
  CHECK(bank.state(0, 1) == 1);  // floor 1
}

TEST_CASE("bounds and mask consistency hold under random update storms") {
  Rng rng(7);
  const int n = 2;
  TaBank bank(3, 10, n);
  Rng init(3);
  bank.randomize_boundary(init);
  for (int step = 0; step < 20000; ++step) {
    const int j = static_cast<int>(rng.below(3));
    const int k = static_cast<int>(rng.below(10));
    if (rng.bernoulli(0.5))
      bank.inc(j, k);
    else
      bank.dec(j, k);
  }
  for (int j = 0; j < 3; ++j) {
    int included = 0;
    for (int k = 0; k < 10; ++k) {
      CHECK(bank.state(j, k) >= 1);
      CHECK(bank.state(j, k) <= 2 * n);
      const bool mask_bit = (bank.mask(j)[k >> 6] >> (k & 63)) & 1u;
      CHECK(mask_bit == (bank.state(j, k) > n));
      included += bank.state(j, k) > n;
    }
    CHECK(bank.include_count(j) == included);
  }
}

TEST_CASE("literal vectors satisfy complementarity for any width") {
  Rng rng(5);
  for (std::size_t o : {std::size_t{1}, std::size_t{7}, std::size_t{63},
                        std::size_t{64}, std::size_t{65}, std::size_t{130}}) {
    const BitVector vars = random_bits(rng, o);
    const LiteralVector lv = LiteralVector::from_variables(vars);
    REQUIRE(lv.bits.size() == 2 * o);
    for (std::size_t k = 0; k < o; ++k) {
      CHECK(lv.get(static_cast<int>(k)) == vars.get(k));
      CHECK((lv.get(static_cast<int>(k)) ^ lv.get(static_cast<int>(o + k))) == 1);
    }
  }
}

TEST_CASE("packed clause_eval equals the naive per-literal loop") {
  Rng rng(123);
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t width = 1 + rng.below(130);
    BitVector lits = random_bits(rng, width);
    BitVector mask(width);
    // sparse-ish include masks so both outcomes occur often
    for (std::size_t k = 0; k < width; ++k)
      if (rng.bernoulli(0.15)) mask.set(k);
    const bool learning = rng.bernoulli(0.5);

    const bool packed = clause_eval(mask.data(), static_cast<int>(mask.count()),
                                    lits.data(), mask.words(),
                                    learning ? EvalMode::Learning : EvalMode::Inference);
    const bool naive = ref::clause_eval(to_flags(mask), to_flags(lits), learning);
    REQUIRE(packed == naive);
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("clause_eval is monotone under 0->1 literal flips") {
  Rng rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t width = 1 + rng.below(90);
    BitVector lits = random_bits(rng, width);
    BitVector mask(width);
    for (std::size_t k = 0; k < width; ++k)
      if (rng.bernoulli(0.2)) mask.set(k);
    const int count = static_cast<int>(mask.count());

    const bool before =
        clause_eval(mask.data(), count, lits.data(), mask.words(), EvalMode::Inference);
    // flip a handful of literals to one
    for (int flips = 0; flips < 4; ++flips)
      lits.set(rng.below(static_cast<std::uint32_t>(width)));
    const bool after =
        clause_eval(mask.data(), count, lits.data(), mask.words(), EvalMode::Inference);
    if (before) CHECK(after);
  }
}

TEST_CASE("bank state access is range checked") {
  TaBank bank(2, 4, 3);
  CHECK_THROWS_AS(bank.set_state(0, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(bank.set_state(0, 0, 7), std::out_of_range);
}

TEST_SUITE_END();
