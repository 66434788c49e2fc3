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
#include <cstdint>
#include <span>
#include <stdexcept>

#include "ctm/automata.hpp"

namespace ctm {

enum class FeedbackType { TypeI, TypeII };

// Probability that a clause is picked for feedback given the vote sum v and
// target T. y=1 pushes v up toward T, y=0 pushes it down toward -T; beyond
// +/-T the vote sum is clamped, so the probability saturates at 0 or 1.
inline double select_prob(std::int64_t v, int threshold, int y) {
  const std::int64_t c =
      std::clamp<std::int64_t>(v, -static_cast<std::int64_t>(threshold), threshold);
  const double t = static_cast<double>(threshold);
  return y == 1 ? (t - static_cast<double>(c)) / (2.0 * t)
                : (t + static_cast<double>(c)) / (2.0 * t);
}

// Positive clauses learn their class's patterns (Type I on y=1), negative
// clauses learn what the class is not, so the roles swap.
inline FeedbackType dispatch_feedback(int polarity, int y) {
  return (polarity > 0) == (y == 1) ? FeedbackType::TypeI : FeedbackType::TypeII;
}

// Membership predicates for the three feedback target sets, given one
// (literal value, clause output) pair. Selection bits r/q are applied by the
// callers.
inline bool type_ia_member(bool literal, bool clause_output) {
  return literal && clause_output;
}
inline bool type_ib_candidate(bool literal, bool clause_output) {
  return !literal || !clause_output;
}
inline bool type_ii_member(bool literal, bool clause_output) {
  return !literal && clause_output;
}

namespace detail {
inline bool word_bit(const std::uint64_t* words, int k) {
  return (words[k >> 6] >> (k & 63)) & 1u;
}
}  // namespace detail

// Type I on a selected clause. When the clause fired, literals at 1 are
// reinforced toward Include (Ia) and literals at 0 are stochastically pushed
// toward Exclude at rate 1/s (Ib). When it did not fire, every automaton is a
// Type Ib candidate and no literal vector is needed. Draws are consumed in
// literal order, one per Ib candidate.
template <class RngT>
void apply_type_i(TaBank& bank, int j, bool clause_output,
                  const std::uint64_t* literal_words, double inv_s, RngT& rng) {
  const int n = bank.literals();
  if (clause_output) {
    if (literal_words == nullptr)
      throw std::invalid_argument("Type I on a firing clause requires the literal vector");
    for (int k = 0; k < n; ++k) {
      if (detail::word_bit(literal_words, k))
        bank.inc(j, k);
      else if (rng.bernoulli(inv_s))
        bank.dec(j, k);
    }
  } else {
    for (int k = 0; k < n; ++k)
      if (rng.bernoulli(inv_s)) bank.dec(j, k);
  }
}

// Type II on a selected clause: only a firing clause changes, and only the
// automata whose literal is 0 move (toward Include, so the clause learns to
// reject this input). No randomness.
inline void apply_type_ii(TaBank& bank, int j, bool clause_output,
                          const std::uint64_t* literal_words) {
  if (!clause_output) return;
  if (literal_words == nullptr)
    throw std::invalid_argument("Type II on a firing clause requires the literal vector");
  const int n = bank.literals();
  for (int k = 0; k < n; ++k)
    if (!detail::word_bit(literal_words, k)) bank.inc(j, k);
}

// Integer clause weight update; 1 is the floor and only firing clauses move.
inline std::int32_t weight_update(std::int32_t w, bool clause_output, FeedbackType type) {
  if (!clause_output) return w;
  if (type == FeedbackType::TypeI) return w + 1;
  return w > 1 ? w - 1 : w;
}

}  // namespace ctm
