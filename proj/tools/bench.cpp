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

// Times the packed clause-evaluation path (serial and OpenMP) against the
// naive serial reference on one synthetic scoring workload, and the training
// loop at several worker counts. The score equality check doubles as an
// end-to-end cross-check of the packed kernels.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "ctm/binarize.hpp"
#include "ctm/classifier.hpp"
#include "reference.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ctm::BitImage random_image(ctm::Rng& rng, int x, int y) {
  ctm::BitImage im(x, y, 1);
  for (std::size_t i = 0; i < im.bits.size(); ++i)
    if (rng.bernoulli(0.5)) im.bits.set(i);
  return im;
}

ctm::ref::Bits image_flags(const ctm::BitImage& im) {
  ctm::ref::Bits out(im.bits.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = im.bits.get(i) ? 1 : 0;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctm kernel benchmark: packed vs naive reference, serial vs OpenMP"};
  int image_x = 16, image_y = 16, clauses = 64, filter = 5, images = 50;
  int classes = 4;
  std::uint64_t seed = 1;
  app.add_option("--x", image_x)->capture_default_str();
  app.add_option("--y", image_y)->capture_default_str();
  app.add_option("--clauses", clauses, "Clauses per class")->capture_default_str();
  app.add_option("--filter", filter)->capture_default_str();
  app.add_option("--images", images)->capture_default_str();
  app.add_option("--classes", classes)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  ctm::Hyperparams hp;
  hp.clauses_per_class = clauses;
  hp.threshold = clauses;
  hp.filter_size = filter;
  hp.rng_seed = seed;
  ctm::MulticlassModel model = ctm::MulticlassModel::create(
      hp, ctm::ModelKind::Convolutional, image_x, image_y, classes);

  // Sparse random includes: dense enough to cost work, sparse enough to fire.
  ctm::Rng rng(seed);
  for (auto& cm : model.classes)
    for (ctm::TaBank* bank : {&cm.positive, &cm.negative})
      for (int j = 0; j < bank->clauses(); ++j)
        for (int k = 0; k < bank->literals(); ++k)
          if (rng.bernoulli(0.04))
            bank->set_state(j, k, static_cast<std::int16_t>(hp.states_per_action + 1));

  std::vector<ctm::BitImage> batch;
  for (int i = 0; i < images; ++i) batch.push_back(random_image(rng, image_x, image_y));

  // Naive reference, serial.
  std::vector<long long> ref_scores;
  const auto ref_start = Clock::now();
  for (const auto& im : batch) {
    const auto flags = image_flags(im);
    for (const auto& cm : model.classes) {
      std::vector<ctm::ref::Bits> pos, neg;
      std::vector<int> wpos, wneg;
      for (int j = 0; j < cm.positive.clauses(); ++j) {
        ctm::ref::Bits p(static_cast<std::size_t>(cm.positive.literals()), 0);
        ctm::ref::Bits n(static_cast<std::size_t>(cm.negative.literals()), 0);
        for (int k : cm.positive.included_literals(j)) p[static_cast<std::size_t>(k)] = 1;
        for (int k : cm.negative.included_literals(j)) n[static_cast<std::size_t>(k)] = 1;
        pos.push_back(std::move(p));
        neg.push_back(std::move(n));
        wpos.push_back(cm.positive_weights[static_cast<std::size_t>(j)]);
        wneg.push_back(cm.negative_weights[static_cast<std::size_t>(j)]);
      }
      ref_scores.push_back(ctm::ref::class_score(pos, neg, wpos, wneg, flags, image_x,
                                                 image_y, 1, filter, 1));
    }
  }
  const double ref_time = seconds_since(ref_start);

  // Packed, serial.
  std::vector<long long> packed_scores;
  const auto packed_start = Clock::now();
  {
    ctm::PatchLiterals patches;
    for (const auto& im : batch) {
      patches.build(im, model.layout);
      for (const auto& cm : model.classes)
        packed_scores.push_back(ctm::class_score(cm, patches));
    }
  }
  const double packed_time = seconds_since(packed_start);

  if (ref_scores != packed_scores) {
    std::cerr << "MISMATCH: packed scores differ from the reference\n";
    return 1;
  }

  // Packed evaluation across threads (prediction workload).
  ctm::Dataset eval_set;
  eval_set.image_x = image_x;
  eval_set.image_y = image_y;
  eval_set.layers = 1;
  eval_set.num_classes = classes;
  for (int i = 0; i < images; ++i) {
    eval_set.images.push_back(batch[static_cast<std::size_t>(i)]);
    eval_set.labels.push_back(i % classes);
  }
#ifdef _OPENMP
  const int max_workers = omp_get_max_threads();
#else
  const int max_workers = 1;
#endif
  const auto omp_start = Clock::now();
  (void)ctm::evaluate(model, eval_set, max_workers);
  const double omp_time = seconds_since(omp_start);

  const double per_score = 1e6 / static_cast<double>(images * classes);
  std::cout << "scoring " << images << " images x " << classes << " classes, " << clauses
            << " clauses/class, " << model.layout.num_patches() << " patches\n";
  std::cout << "  naive reference (serial) : " << ref_time * per_score << " us/score\n";
  std::cout << "  packed (serial)          : " << packed_time * per_score << " us/score ("
            << ref_time / packed_time << "x)\n";
  std::cout << "  packed (" << max_workers << " workers)       : " << omp_time * per_score
            << " us/score (" << ref_time / omp_time << "x)\n";

  // Training throughput, serial vs parallel workers.
  const ctm::XorData xor_data = ctm::generate_noisy_xor(2000, 10, 0.4, seed);
  for (int workers : {1, max_workers}) {
    ctm::Hyperparams thp;
    thp.clauses_per_class = clauses;
    thp.threshold = static_cast<int>(1.25 * clauses);
    thp.filter_size = 2;
    thp.rng_seed = seed;
    ctm::MulticlassModel xor_model =
        ctm::MulticlassModel::create(thp, ctm::ModelKind::Convolutional, 4, 4, 2);
    ctm::Trainer trainer(xor_model, workers);
    ctm::FitOptions options;
    options.epochs = 3;
    options.track_train_accuracy = false;
    const auto start = Clock::now();
    trainer.fit(xor_data.train, options);
    const double t = seconds_since(start);
    std::cout << "training xor, " << workers << " worker(s): "
              << 3.0 * 2000.0 / t << " examples/s\n";
    if (workers == max_workers) break;
  }
  return 0;
}
