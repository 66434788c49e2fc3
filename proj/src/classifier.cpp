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
#include "ctm/classifier.hpp"

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ctm {

MulticlassModel MulticlassModel::create(const Hyperparams& params, ModelKind kind,
                                        int image_x, int image_y, int num_classes) {
  if (num_classes < 2) throw ConfigError("a model needs at least two classes");
  if (image_x < 1 || image_y < 1) throw ConfigError("image dimensions must be positive");
  MulticlassModel model;
  model.params = params;
  model.kind = kind;
  if (kind == ModelKind::Convolutional) {
    params.validate_for_image(image_x, image_y);
    model.layout = PatchLayout::convolution(image_x, image_y, params.layers,
                                            params.filter_size, params.stride);
  } else {
    params.validate();
    model.layout = PatchLayout::whole_image(image_x, image_y, params.layers);
  }
  if (model.layout.num_patches() > 65535)
    throw ConfigError("layout produces more than 65535 patches");

  const int half = params.clauses_per_class / 2;
  const int literals = 2 * model.layout.num_vars();
  Rng init(derive_seed(params.rng_seed, Stream::ModelInit));
  model.classes.reserve(static_cast<std::size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    ClassModel cm;
    cm.positive = TaBank(half, literals, params.states_per_action);
    cm.negative = TaBank(half, literals, params.states_per_action);
    cm.positive.randomize_boundary(init);
    cm.negative.randomize_boundary(init);
    cm.positive_weights.assign(static_cast<std::size_t>(half), 1);
    cm.negative_weights.assign(static_cast<std::size_t>(half), 1);
    model.classes.push_back(std::move(cm));
  }
  return model;
}

void MulticlassModel::check_image(const BitImage& image) const {
  if (image.x != layout.image_x || image.y != layout.image_y || image.z != layout.layers)
    throw DimensionError("image shape " + std::to_string(image.x) + "x" +
                         std::to_string(image.y) + "x" + std::to_string(image.z) +
                         " does not match model input " + std::to_string(layout.image_x) +
                         "x" + std::to_string(layout.image_y) + "x" +
                         std::to_string(layout.layers));
}

std::int64_t class_score(const ClassModel& cls, const PatchLiterals& patches) {
  std::int64_t v = 0;
  const int half = cls.positive.clauses();
  for (int j = 0; j < half; ++j)
    if (conv_clause_eval(cls.positive, j, patches, EvalMode::Inference, nullptr))
      v += cls.positive_weights[static_cast<std::size_t>(j)];
  for (int j = 0; j < half; ++j)
    if (conv_clause_eval(cls.negative, j, patches, EvalMode::Inference, nullptr))
      v -= cls.negative_weights[static_cast<std::size_t>(j)];
  return v;
}

int predict(const MulticlassModel& model, const PatchLiterals& patches) {
  int best = 0;
  std::int64_t best_score = class_score(model.classes[0], patches);
  for (int c = 1; c < model.num_classes(); ++c) {
    const std::int64_t score = class_score(model.classes[static_cast<std::size_t>(c)], patches);
    if (score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

int predict(const MulticlassModel& model, const BitImage& image) {
  model.check_image(image);
  PatchLiterals patches;
  patches.build(image, model.layout);
  return predict(model, patches);
}

int binary_predict(const ClassModel& cls, const PatchLiterals& patches) {
  return class_score(cls, patches) >= 0 ? 1 : 0;
}

EvalResult evaluate(const MulticlassModel& model, const Dataset& data, int workers) {
  data.validate();
  if (data.size() == 0) throw ConfigError("evaluation dataset is empty");
  if (data.num_classes != model.num_classes())
    throw ConfigError("dataset has " + std::to_string(data.num_classes) +
                      " classes, model has " + std::to_string(model.num_classes()));
  if (data.image_x != model.layout.image_x || data.image_y != model.layout.image_y ||
      data.layers != model.layout.layers)
    throw DimensionError("dataset image shape does not match model input");

  const int k = model.num_classes();
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  EvalResult result;
  result.num_classes = k;
  result.total = n;
  result.confusion.assign(static_cast<std::size_t>(k) * k, 0);

#ifdef _OPENMP
  if (workers > 1) {
    std::vector<std::vector<std::int64_t>> partial(
        static_cast<std::size_t>(workers),
        std::vector<std::int64_t>(static_cast<std::size_t>(k) * k, 0));
#pragma omp parallel num_threads(workers)
    {
      std::vector<std::int64_t>& conf = partial[static_cast<std::size_t>(omp_get_thread_num())];
      PatchLiterals patches;
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) {
        patches.build(data.images[static_cast<std::size_t>(i)], model.layout);
        const int pred = predict(model, patches);
        ++conf[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)]) * k + pred];
      }
    }
    for (const auto& conf : partial)
      for (std::size_t i = 0; i < conf.size(); ++i) result.confusion[i] += conf[i];
  } else
#endif
  {
    (void)workers;
    PatchLiterals patches;
    for (std::int64_t i = 0; i < n; ++i) {
      patches.build(data.images[static_cast<std::size_t>(i)], model.layout);
      const int pred = predict(model, patches);
      ++result.confusion[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)]) * k + pred];
    }
  }

  std::int64_t correct = 0;
  for (int c = 0; c < k; ++c) correct += result.at(c, c);
  result.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return result;
}

Trainer::Trainer(MulticlassModel& model, int workers)
    : model_(model),
      workers_(std::max(1, workers)),
      inv_s_(1.0 / model.params.specificity),
      trainer_rng_(derive_seed(model.params.rng_seed, Stream::Trainer)) {
#ifndef _OPENMP
  workers_ = 1;
#endif
  worker_rngs_.reserve(static_cast<std::size_t>(workers_));
  for (int w = 0; w < workers_; ++w)
    worker_rngs_.emplace_back(derive_seed(model.params.rng_seed, Stream::Worker,
                                          static_cast<std::uint64_t>(w)));
  const std::size_t total = static_cast<std::size_t>(model.params.clauses_per_class);
  outputs_.assign(total, 0);
  matching_.resize(total);
}

void Trainer::eval_clause(ClassModel& cm, int half, int q) {
  TaBank& bank = q < half ? cm.positive : cm.negative;
  const int j = q < half ? q : q - half;
  auto& match = matching_[static_cast<std::size_t>(q)];
  match.clear();
  outputs_[static_cast<std::size_t>(q)] =
      conv_clause_eval(bank, j, patches_, EvalMode::Learning, &match) ? 1 : 0;
}

template <class RngT>
void Trainer::feedback_clause(ClassModel& cm, int half, int q, int y, double p_select,
                              RngT& rng) {
  if (!rng.bernoulli(p_select)) return;
  const bool positive = q < half;
  const int j = positive ? q : q - half;
  TaBank& bank = positive ? cm.positive : cm.negative;
  std::int32_t& weight = positive ? cm.positive_weights[static_cast<std::size_t>(j)]
                                  : cm.negative_weights[static_cast<std::size_t>(j)];
  const FeedbackType type = dispatch_feedback(positive ? +1 : -1, y);
  const bool fired = outputs_[static_cast<std::size_t>(q)] != 0;
  const std::uint64_t* lits = nullptr;
  if (fired) {
    const int b = select_update_patch(
        std::span<const std::uint16_t>(matching_[static_cast<std::size_t>(q)]), rng);
    lits = patches_.patch(b);
  }
  if (type == FeedbackType::TypeI)
    apply_type_i(bank, j, fired, lits, inv_s_, rng);
  else
    apply_type_ii(bank, j, fired, lits);
  if (model_.params.weighting) weight = weight_update(weight, fired, type);
}

void Trainer::update_class(int cls, int y) {
  ClassModel& cm = model_.classes[static_cast<std::size_t>(cls)];
  const Hyperparams& hp = model_.params;
  const int half = hp.clauses_per_class / 2;
  const int total = hp.clauses_per_class;

  // Phase 1: learning-mode outputs and matching sets for every clause.
  if (workers_ == 1) {
    for (int q = 0; q < total; ++q) eval_clause(cm, half, q);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers_)
#endif
    for (int q = 0; q < total; ++q) eval_clause(cm, half, q);
  }

  // Vote sum is fixed before any update. Weights are 1 unless weighting is
  // enabled, so this is the plain majority vote in the unweighted case.
  std::int64_t v = 0;
  for (int q = 0; q < total; ++q) {
    if (!outputs_[static_cast<std::size_t>(q)]) continue;
    v += q < half ? cm.positive_weights[static_cast<std::size_t>(q)]
                  : -cm.negative_weights[static_cast<std::size_t>(q - half)];
  }
  const double p_select = select_prob(v, hp.threshold, y);

  // Phase 2: independent per-clause feedback, one RNG stream per worker.
  if (workers_ == 1) {
    for (int q = 0; q < total; ++q)
      feedback_clause(cm, half, q, y, p_select, worker_rngs_[0]);
  } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(workers_)
    {
      Rng& rng = worker_rngs_[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
      for (int q = 0; q < total; ++q) feedback_clause(cm, half, q, y, p_select, rng);
    }
#else
    for (int q = 0; q < total; ++q)
      feedback_clause(cm, half, q, y, p_select, worker_rngs_[0]);
#endif
  }
}

TrainStep Trainer::train_example(const BitImage& image, int label) {
  const int k = model_.num_classes();
  if (label < 0 || label >= k)
    throw ConfigError("label " + std::to_string(label) + " out of range for " +
                      std::to_string(k) + " classes");
  model_.check_image(image);

  TrainStep step;
  step.target_class = label;
  const std::uint32_t draw = trainer_rng_.below(static_cast<std::uint32_t>(k - 1));
  step.negative_class = static_cast<int>(draw) + (static_cast<int>(draw) >= label ? 1 : 0);

  patches_.build(image, model_.layout);
  update_class(step.target_class, 1);
  update_class(step.negative_class, 0);
  return step;
}

std::vector<EpochMetrics> Trainer::fit(const Dataset& train, const FitOptions& options) {
  train.validate();
  if (train.size() == 0) throw ConfigError("training dataset is empty");
  if (train.num_classes != model_.num_classes())
    throw ConfigError("dataset has " + std::to_string(train.num_classes) +
                      " classes, model has " + std::to_string(model_.num_classes()));
  if (options.test) options.test->validate();

  std::vector<EpochMetrics> metrics;
  metrics.reserve(static_cast<std::size_t>(options.epochs));
  const std::size_t n = train.size();
  order_.resize(n);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < n; ++i) order_[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::uint32_t j = trainer_rng_.below(static_cast<std::uint32_t>(i + 1));
      std::swap(order_[i], order_[j]);
    }
    for (std::size_t i = 0; i < n; ++i)
      train_example(train.images[order_[i]], train.labels[order_[i]]);

    EpochMetrics m;
    m.epoch = epoch;
    if (options.track_train_accuracy)
      m.train_accuracy = evaluate(model_, train, workers_).accuracy;
    if (options.test) m.test_accuracy = evaluate(model_, *options.test, workers_).accuracy;
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    metrics.push_back(m);
    if (options.on_epoch) options.on_epoch(m);
  }
  return metrics;
}

std::vector<EpochMetrics> fit(MulticlassModel& model, const Dataset& train,
                              const FitOptions& options, int workers) {
  Trainer trainer(model, workers);
  return trainer.fit(train, options);
}

std::size_t model_payload_bytes(const MulticlassModel& model) {
  const std::size_t half = static_cast<std::size_t>(model.params.clauses_per_class) / 2;
  const std::size_t literals = static_cast<std::size_t>(model.literal_count());
  const std::size_t per_class =
      2 * half * literals * sizeof(std::int16_t) + 2 * half * sizeof(std::int32_t);
  return per_class * model.classes.size();
}

}  // namespace ctm
