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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctm/bitvec.hpp"
#include "ctm/rng.hpp"

namespace ctm {

enum class TaAction { Exclude, Include };

// Empty clauses match everything while learning and nothing at inference.
enum class EvalMode { Learning, Inference };

// A two-action automaton with states 1..2N excludes its literal in the lower
// half of the state space and includes it in the upper half.
inline TaAction ta_action(int state, int states_per_action) {
  if (state < 1 || state > 2 * states_per_action)
    throw std::out_of_range("automaton state " + std::to_string(state) +
                            " outside 1.." + std::to_string(2 * states_per_action));
  return state <= states_per_action ? TaAction::Exclude : TaAction::Include;
}

// Literal assignment for one input: bits [0,o) are the variables, bits
// [o,2o) their negations.
struct LiteralVector {
  int o = 0;
  BitVector bits;

  static LiteralVector from_variables(const BitVector& vars) {
    LiteralVector lv;
    lv.o = static_cast<int>(vars.size());
    lv.bits.resize(2 * vars.size());
    if (lv.o > 0) {
      lv.bits.blit_from(0, vars, 0, vars.size(), false);
      lv.bits.blit_from(vars.size(), vars, 0, vars.size(), true);
    }
    return lv;
  }

  bool get(int k) const { return bits.get(static_cast<std::size_t>(k)); }
};

// One polarity's automaton states: clauses x literals, each state in 1..2N.
// The per-clause include masks (state > N) are maintained incrementally so
// clause evaluation never rescans states.
class TaBank {
 public:
  TaBank() = default;
  TaBank(int clauses, int literals, int states_per_action)
      : clauses_(clauses),
        literals_(literals),
        n_(states_per_action),
        words_per_clause_(BitVector::word_count(static_cast<std::size_t>(literals))),
        states_(static_cast<std::size_t>(clauses) * literals, static_cast<std::int16_t>(states_per_action)),
        masks_(static_cast<std::size_t>(clauses) * words_per_clause_, 0),
        counts_(static_cast<std::size_t>(clauses), 0) {}

  int clauses() const { return clauses_; }
  int literals() const { return literals_; }
  int states_per_action() const { return n_; }
  std::size_t words_per_clause() const { return words_per_clause_; }

  // Every automaton starts on the decision boundary, at N or N+1 with equal
  // probability. Draw order: clauses ascending, literals ascending.
  void randomize_boundary(Rng& rng) {
    for (int j = 0; j < clauses_; ++j)
      for (int k = 0; k < literals_; ++k)
        set_state(j, k, static_cast<std::int16_t>(n_ + (rng.bernoulli(0.5) ? 1 : 0)));
  }

  std::int16_t state(int j, int k) const { return states_[index(j, k)]; }

  void set_state(int j, int k, std::int16_t value) {
    if (value < 1 || value > 2 * n_)
      throw std::out_of_range("automaton state " + std::to_string(value) +
                              " outside 1.." + std::to_string(2 * n_));
    const bool was_included = states_[index(j, k)] > n_;
    states_[index(j, k)] = value;
    const bool included = value > n_;
    if (included != was_included) {
      set_mask_bit(j, k, included);
      counts_[j] += included ? 1 : -1;
    }
  }

  // Saturating +1 (toward Include).
  void inc(int j, int k) {
    std::int16_t& s = states_[index(j, k)];
    if (s < 2 * n_) {
      ++s;
      if (s == n_ + 1) {
        set_mask_bit(j, k, true);
        ++counts_[j];
      }
    }
  }

  // Saturating -1 (toward Exclude).
  void dec(int j, int k) {
    std::int16_t& s = states_[index(j, k)];
    if (s > 1) {
      --s;
      if (s == n_) {
        set_mask_bit(j, k, false);
        --counts_[j];
      }
    }
  }

  const std::uint64_t* mask(int j) const {
    return masks_.data() + static_cast<std::size_t>(j) * words_per_clause_;
  }

  int include_count(int j) const { return counts_[j]; }
  bool clause_empty(int j) const { return counts_[j] == 0; }

  // { k | state[j,k] > N }, ascending.
  std::vector<int> included_literals(int j) const {
    check_clause(j);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(counts_[j]));
    for (int k = 0; k < literals_; ++k)
      if (states_[index(j, k)] > n_) out.push_back(k);
    return out;
  }

  std::span<const std::int16_t> raw_states() const { return states_; }
  void load_states(std::span<const std::int16_t> values) {
    if (values.size() != states_.size())
      throw std::invalid_argument("state payload size mismatch");
    for (int j = 0; j < clauses_; ++j)
      for (int k = 0; k < literals_; ++k)
        set_state(j, k, values[index(j, k)]);
  }

  bool operator==(const TaBank&) const = default;

 private:
  std::size_t index(int j, int k) const {
    return static_cast<std::size_t>(j) * literals_ + k;
  }
  void check_clause(int j) const {
    if (j < 0 || j >= clauses_) throw std::out_of_range("clause index out of range");
  }
  void set_mask_bit(int j, int k, bool v) {
    std::uint64_t& w = masks_[static_cast<std::size_t>(j) * words_per_clause_ + (static_cast<std::size_t>(k) >> 6)];
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    w = v ? (w | bit) : (w & ~bit);
  }

  int clauses_ = 0;
  int literals_ = 0;
  int n_ = 0;
  std::size_t words_per_clause_ = 0;
  std::vector<std::int16_t> states_;
  std::vector<std::uint64_t> masks_;
  std::vector<int> counts_;
};

// Conjunction over the included literals; the empty clause follows the mode
// rule. Packed form: (lits AND mask) == mask.
inline bool clause_eval(const std::uint64_t* include_mask, int include_count,
                        const std::uint64_t* literal_words, std::size_t nwords,
                        EvalMode mode) {
  if (include_count == 0) return mode == EvalMode::Learning;
  return covers(literal_words, include_mask, nwords);
}

inline bool clause_eval(const TaBank& bank, int j, const LiteralVector& lits,
                        EvalMode mode) {
  return clause_eval(bank.mask(j), bank.include_count(j), lits.bits.data(),
                     bank.words_per_clause(), mode);
}

// Index-set form, mirroring the formal definition. Used by tests and tools.
inline bool clause_eval(std::span<const int> included, const LiteralVector& lits,
                        EvalMode mode) {
  if (included.empty()) return mode == EvalMode::Learning;
  for (int k : included)
    if (!lits.get(k)) return false;
  return true;
}

}  // namespace ctm
