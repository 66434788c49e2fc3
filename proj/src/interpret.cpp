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
#include "ctm/interpret.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ctm {

namespace {

const TaBank& bank_of(const ClassModel& cm, int polarity) {
  return polarity > 0 ? cm.positive : cm.negative;
}

// Origin window along one axis from the included position literals:
// a positive literal at threshold t demands origin <= t, a negated one
// demands origin > t.
CoordRange derive_range(const TaBank& bank, int clause, int num_vars,
                        int first_var, const std::vector<int>& thresholds,
                        const std::vector<int>& origins) {
  CoordRange range;
  range.low = -1;
  range.high = origins.back();
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const int var = first_var + static_cast<int>(t);
    if (bank.state(clause, var) > bank.states_per_action())
      range.high = std::min(range.high, thresholds[t]);
    if (bank.state(clause, num_vars + var) > bank.states_per_action())
      range.low = std::max(range.low, thresholds[t]);
  }
  return range;
}

}  // namespace

ClausePattern clause_to_pattern(const MulticlassModel& model, int class_index,
                                int polarity, int clause_index) {
  if (class_index < 0 || class_index >= model.num_classes())
    throw std::out_of_range("class index out of range");
  const ClassModel& cm = model.classes[static_cast<std::size_t>(class_index)];
  const TaBank& bank = bank_of(cm, polarity);
  if (clause_index < 0 || clause_index >= bank.clauses())
    throw std::out_of_range("clause index out of range");
  const PatchLayout& layout = model.layout;
  const int num_vars = layout.num_vars();
  const int n = bank.states_per_action();

  ClausePattern p;
  p.class_index = class_index;
  p.polarity = polarity > 0 ? +1 : -1;
  p.clause_index = clause_index;
  p.weight = polarity > 0 ? cm.positive_weights[static_cast<std::size_t>(clause_index)]
                          : cm.negative_weights[static_cast<std::size_t>(clause_index)];
  p.filter_x = layout.filter_x;
  p.filter_y = layout.filter_y;
  p.layers = layout.layers;

  p.rows.reserve(static_cast<std::size_t>(p.layers) * p.filter_y);
  for (int pz = 0; pz < p.layers; ++pz) {
    for (int py = 0; py < p.filter_y; ++py) {
      std::string row(static_cast<std::size_t>(p.filter_x), '*');
      for (int px = 0; px < p.filter_x; ++px) {
        const int var = px + p.filter_x * (py + p.filter_y * pz);
        const bool plain = bank.state(clause_index, var) > n;
        const bool negated = bank.state(clause_index, num_vars + var) > n;
        if (plain && negated)
          row[static_cast<std::size_t>(px)] = 'X';
        else if (plain)
          row[static_cast<std::size_t>(px)] = '1';
        else if (negated)
          row[static_cast<std::size_t>(px)] = '0';
      }
      p.rows.push_back(std::move(row));
    }
  }

  const int pix = layout.pixel_vars();
  p.x_range = derive_range(bank, clause_index, num_vars, pix, layout.thresholds_x,
                           layout.origins_x);
  p.y_range = derive_range(bank, clause_index, num_vars,
                           pix + static_cast<int>(layout.thresholds_x.size()),
                           layout.thresholds_y, layout.origins_y);
  return p;
}

std::vector<int> pattern_pixel_literals(const ClausePattern& pattern, int num_vars) {
  std::vector<int> literals;
  for (int pz = 0; pz < pattern.layers; ++pz) {
    for (int py = 0; py < pattern.filter_y; ++py) {
      for (int px = 0; px < pattern.filter_x; ++px) {
        const int var = px + pattern.filter_x * (py + pattern.filter_y * pz);
        switch (pattern.cell(px, py, pz)) {
          case '1':
            literals.push_back(var);
            break;
          case '0':
            literals.push_back(num_vars + var);
            break;
          case 'X':
            literals.push_back(var);
            literals.push_back(num_vars + var);
            break;
          default:
            break;
        }
      }
    }
  }
  std::sort(literals.begin(), literals.end());
  return literals;
}

std::string render_pattern(const ClausePattern& pattern) {
  std::ostringstream out;
  for (const std::string& row : pattern.rows) out << row << '\n';
  // Shown 1-based so an unconstrained lower bound reads "0 <".
  out << pattern.x_range.low + 1 << " < X <= " << pattern.x_range.high + 1 << '\n';
  out << pattern.y_range.low + 1 << " < Y <= " << pattern.y_range.high + 1 << '\n';
  return out.str();
}

int export_report(const MulticlassModel& model, const Dataset* firing_data,
                  int top_k, std::ostream& out) {
  const Hyperparams& hp = model.params;
  const int half = hp.clauses_per_class / 2;
  const int k = std::clamp(top_k, 0, half);

  out << "clauses per class: " << hp.clauses_per_class << "  threshold: " << hp.threshold
      << "  specificity: " << hp.specificity << "  filter: " << model.layout.filter_x
      << "x" << model.layout.filter_y << "  stride: " << model.layout.stride
      << "  weighting: " << (hp.weighting ? "on" : "off") << '\n';
  out << "classes: " << model.num_classes() << "  top clauses per polarity: " << k << '\n';

  // One pass over the evaluation set per clause we report on.
  std::vector<PatchLiterals> packed;
  if (firing_data && firing_data->size() > 0) {
    packed.resize(firing_data->size());
    for (std::size_t i = 0; i < firing_data->size(); ++i)
      packed[i].build(firing_data->images[i], model.layout);
  }

  int entries = 0;
  for (int c = 0; c < model.num_classes(); ++c) {
    const ClassModel& cm = model.classes[static_cast<std::size_t>(c)];
    for (int polarity : {+1, -1}) {
      const auto& weights = polarity > 0 ? cm.positive_weights : cm.negative_weights;
      std::vector<int> order(static_cast<std::size_t>(half));
      for (int j = 0; j < half; ++j) order[static_cast<std::size_t>(j)] = j;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return weights[static_cast<std::size_t>(a)] > weights[static_cast<std::size_t>(b)];
      });

      for (int rank = 0; rank < k; ++rank) {
        const int j = order[static_cast<std::size_t>(rank)];
        const ClausePattern p = clause_to_pattern(model, c, polarity, j);
        out << '\n'
            << "class " << c << "  polarity " << (polarity > 0 ? '+' : '-')
            << "  clause " << j << "  weight " << p.weight << "  firing ";
        if (!packed.empty()) {
          const TaBank& bank = bank_of(cm, polarity);
          std::size_t fired = 0;
          for (const PatchLiterals& pl : packed)
            if (conv_clause_eval(bank, j, pl, EvalMode::Inference, nullptr)) ++fired;
          out << static_cast<double>(fired) / static_cast<double>(packed.size());
        } else {
          out << '-';
        }
        out << '\n' << render_pattern(p);
        ++entries;
      }
    }
  }
  return entries;
}

int export_report(const MulticlassModel& model, const Dataset* firing_data,
                  int top_k, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  const int entries = export_report(model, firing_data, top_k, out);
  if (!out) throw Error("write failed: " + path);
  return entries;
}

}  // namespace ctm
