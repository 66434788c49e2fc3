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
#include <functional>
#include <vector>

#include "ctm/automata.hpp"
#include "ctm/convolution.hpp"
#include "ctm/feedback.hpp"
#include "ctm/hyperparams.hpp"
#include "ctm/image.hpp"
#include "ctm/rng.hpp"

namespace ctm {

// Flat models evaluate each clause once on the whole input; convolutional
// models slide each clause over every patch and OR the outputs.
enum class ModelKind : std::uint8_t { Flat = 0, Convolutional = 1 };

// One class's voters: a bank of clauses for the class, a bank against it,
// and an integer weight (>= 1) per clause.
struct ClassModel {
  TaBank positive;
  TaBank negative;
  std::vector<std::int32_t> positive_weights;
  std::vector<std::int32_t> negative_weights;

  bool operator==(const ClassModel&) const = default;
};

struct MulticlassModel {
  Hyperparams params;
  ModelKind kind = ModelKind::Convolutional;
  PatchLayout layout;
  std::vector<ClassModel> classes;

  // Builds the layout from the image shape and seeds every automaton on the
  // include/exclude boundary (params.rng_seed, ModelInit stream; classes
  // ascending, positive bank before negative).
  static MulticlassModel create(const Hyperparams& params, ModelKind kind,
                                int image_x, int image_y, int num_classes);

  int num_classes() const { return static_cast<int>(classes.size()); }
  int literal_count() const { return 2 * layout.num_vars(); }
  void check_image(const BitImage& image) const;
};

// Weighted clause vote for one class, inference mode: sum of firing positive
// clause weights minus sum of firing negative clause weights.
std::int64_t class_score(const ClassModel& cls, const PatchLiterals& patches);

// Argmax over class scores; ties go to the lowest class index.
int predict(const MulticlassModel& model, const PatchLiterals& patches);
int predict(const MulticlassModel& model, const BitImage& image);

// Single-machine threshold semantics: 1 iff the vote sum is >= 0, so a tied
// vote resolves to the positive class.
int binary_predict(const ClassModel& cls, const PatchLiterals& patches);

struct EvalResult {
  double accuracy = 0.0;
  std::int64_t total = 0;
  int num_classes = 0;
  // row = true class, column = predicted class
  std::vector<std::int64_t> confusion;

  std::int64_t at(int truth, int predicted) const {
    return confusion[static_cast<std::size_t>(truth) * num_classes + predicted];
  }
};

// Read-only over the model; parallelizes across examples when workers > 1.
EvalResult evaluate(const MulticlassModel& model, const Dataset& data, int workers = 1);

struct TrainStep {
  int target_class = -1;    // updated with y=1
  int negative_class = -1;  // updated with y=0
};

struct EpochMetrics {
  int epoch = 0;
  double train_accuracy = -1.0;  // < 0 when not tracked
  double test_accuracy = -1.0;   // < 0 when no test set given
  double seconds = 0.0;
};

struct FitOptions {
  int epochs = 1;
  bool track_train_accuracy = true;
  const Dataset* test = nullptr;
  std::function<void(const EpochMetrics&)> on_epoch;
};

// Drives the learning loop for one model. Examples are visited in a seeded
// shuffled order, one at a time; within an example, clause evaluation and
// feedback fan out across the worker pool after the vote sum is fixed.
//
// Randomness is split into one trainer stream (epoch shuffles, then one
// negative-class draw per example) and one stream per worker. A worker
// consumes, per clause it owns (positive bank then negative, ascending): the
// selection draw; if selected and the clause fired, the update-patch draw
// (sets of size < 2 consume nothing); for Type I, one draw per Type Ib
// candidate literal, ascending. With workers=1 this is the canonical order
// golden tests rely on; for a fixed worker count > 1 the static clause
// partition keeps runs reproducible as well.
class Trainer {
 public:
  Trainer(MulticlassModel& model, int workers = 1);

  // One online update: the labeled class learns y=1 and one uniformly drawn
  // other class learns y=0.
  TrainStep train_example(const BitImage& image, int label);

  std::vector<EpochMetrics> fit(const Dataset& train, const FitOptions& options);

  int workers() const { return workers_; }

 private:
  void update_class(int cls, int y);
  void eval_clause(ClassModel& cm, int half, int q);
  template <class RngT>
  void feedback_clause(ClassModel& cm, int half, int q, int y, double p_select,
                       RngT& rng);

  MulticlassModel& model_;
  int workers_;
  double inv_s_;
  Rng trainer_rng_;
  std::vector<Rng> worker_rngs_;
  PatchLiterals patches_;
  std::vector<std::uint8_t> outputs_;
  std::vector<std::vector<std::uint16_t>> matching_;
  std::vector<std::uint32_t> order_;
};

// Convenience wrapper: trains a freshly created model's Trainer.
std::vector<EpochMetrics> fit(MulticlassModel& model, const Dataset& train,
                              const FitOptions& options, int workers = 1);

// Serialized size of the automaton states and weights; the container header
// adds a near-constant overhead on top.
std::size_t model_payload_bytes(const MulticlassModel& model);

}  // namespace ctm
