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
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ctm/binarize.hpp"
#include "ctm/classifier.hpp"
#include "ctm/data_io.hpp"
#include "ctm/interpret.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

int default_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

struct DataArgs {
  std::string train_data, test_data;
  std::string train_images, train_labels, test_images, test_labels;
  int window = 11;
  int thresh_c = 2;
  int classes = 10;
};

void add_idx_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("--window", args.window, "Adaptive-threshold window (odd)")
      ->capture_default_str();
  cmd->add_option("--thresh-c", args.thresh_c, "Adaptive-threshold offset c")
      ->capture_default_str();
  cmd->add_option("--classes", args.classes, "Class count for IDX labels")
      ->capture_default_str();
}

ctm::Dataset load_split(const std::string& data_file, const std::string& images,
                        const std::string& labels, const DataArgs& args) {
  if (!data_file.empty()) return ctm::load_dataset(data_file);
  return ctm::assemble_dataset(ctm::load_idx_images(images),
                               ctm::load_idx_labels(labels), args.classes,
                               args.window, args.thresh_c);
}

void print_confusion(const ctm::EvalResult& result) {
  std::cout << "confusion (rows = truth):\n";
  for (int t = 0; t < result.num_classes; ++t) {
    for (int p = 0; p < result.num_classes; ++p)
      std::cout << result.at(t, p) << (p + 1 < result.num_classes ? ' ' : '\n');
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Tsetlin machine classifiers with convolutional clause filters"};
  app.require_subcommand(1);

  // ---- train ----------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train a model and write it to disk");
  DataArgs data_args;
  bool use_xor = false;
  int xor_train = 2500, xor_test = 10000;
  double xor_noise = 0.4;
  ctm::Hyperparams hp;
  hp.threshold = 0;  // 0 = derive from the clause budget below
  bool flat = false;
  int workers = default_workers();
  std::string model_out, log_path;

  train->add_flag("--xor", use_xor, "Train on a generated noisy XOR dataset");
  train->add_option("--xor-train", xor_train, "XOR training examples")->capture_default_str();
  train->add_option("--xor-test", xor_test, "XOR test examples")->capture_default_str();
  train->add_option("--xor-noise", xor_noise, "XOR label noise rate")->capture_default_str();
  train->add_option("--train-data", data_args.train_data, "Cached training dataset (.ctmd)");
  train->add_option("--test-data", data_args.test_data, "Cached test dataset (.ctmd)");
  train->add_option("--train-images", data_args.train_images, "IDX training images");
  train->add_option("--train-labels", data_args.train_labels, "IDX training labels");
  train->add_option("--test-images", data_args.test_images, "IDX test images");
  train->add_option("--test-labels", data_args.test_labels, "IDX test labels");
  add_idx_options(train, data_args);
  train->add_option("--clauses", hp.clauses_per_class, "Clauses per class (even)")
      ->capture_default_str();
  train->add_option("--threshold", hp.threshold,
                    "Vote target T (default round(1.25*clauses))");
  train->add_option("--specificity", hp.specificity, "Specificity s")->capture_default_str();
  train->add_option("--states", hp.states_per_action, "Automaton states per action")
      ->capture_default_str();
  train->add_option("--filter", hp.filter_size, "Convolution filter width W")
      ->capture_default_str();
  train->add_option("--stride", hp.stride, "Convolution stride d")->capture_default_str();
  train->add_option("--epochs", hp.epochs, "Training epochs")->capture_default_str();
  train->add_option("--seed", hp.rng_seed, "Run seed")->capture_default_str();
  train->add_flag("--weighting", hp.weighting, "Learn integer clause weights");
  train->add_flag("--flat", flat, "Classic flat machine (no convolution)");
  train->add_option("--workers", workers, "Worker threads (1 = canonical order)")
      ->capture_default_str();
  train->add_option("--out", model_out, "Output model path")->required();
  train->add_option("--log", log_path, "Metrics CSV to append to");

  // ---- eval -----------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a test set");
  DataArgs eval_args;
  std::string model_path;
  int eval_workers = default_workers();
  eval->add_option("--model", model_path, "Model file")->required();
  eval->add_option("--test-data", eval_args.test_data, "Cached test dataset (.ctmd)");
  eval->add_option("--test-images", eval_args.test_images, "IDX test images");
  eval->add_option("--test-labels", eval_args.test_labels, "IDX test labels");
  add_idx_options(eval, eval_args);
  eval->add_option("--workers", eval_workers, "Worker threads")->capture_default_str();

  // ---- export ---------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "Write the clause pattern report");
  DataArgs export_args;
  std::string export_model, export_out;
  int top_k = 5;
  export_cmd->add_option("--model", export_model, "Model file")->required();
  export_cmd->add_option("--out", export_out, "Report path (stdout when omitted)");
  export_cmd->add_option("-k,--top", top_k, "Clauses per class and polarity")
      ->capture_default_str();
  export_cmd->add_option("--test-data", export_args.test_data,
                         "Dataset for firing rates (.ctmd)");
  export_cmd->add_option("--test-images", export_args.test_images, "IDX images for rates");
  export_cmd->add_option("--test-labels", export_args.test_labels, "IDX labels for rates");
  add_idx_options(export_cmd, export_args);

  // ---- gen-xor --------------------------------------------------------
  auto* gen = app.add_subcommand("gen-xor", "Generate the noisy XOR dataset files");
  std::string gen_out;
  int gen_train = 2500, gen_test = 10000;
  double gen_noise = 0.4;
  std::uint64_t gen_seed = 0;
  gen->add_option("--out", gen_out, "Output path prefix")->required();
  gen->add_option("--train", gen_train, "Training examples")->capture_default_str();
  gen->add_option("--test", gen_test, "Test examples")->capture_default_str();
  gen->add_option("--noise", gen_noise, "Training label noise rate")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();

  // ---- binarize -------------------------------------------------------
  auto* bin = app.add_subcommand("binarize", "Binarize IDX images into a dataset cache");
  DataArgs bin_args;
  std::string bin_images, bin_labels, bin_out;
  bin->add_option("--images", bin_images, "IDX image file")->required();
  bin->add_option("--labels", bin_labels, "IDX label file")->required();
  bin->add_option("--out", bin_out, "Output dataset path (.ctmd)")->required();
  add_idx_options(bin, bin_args);

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    ctm::Dataset train_set;
    std::optional<ctm::Dataset> test_set;
    if (use_xor) {
      ctm::XorData xd = ctm::generate_noisy_xor(xor_train, xor_test, xor_noise, hp.rng_seed);
      train_set = std::move(xd.train);
      if (xor_test > 0) test_set = std::move(xd.test);
    } else if (!data_args.train_data.empty() || !data_args.train_images.empty()) {
      train_set = load_split(data_args.train_data, data_args.train_images,
                             data_args.train_labels, data_args);
      if (!data_args.test_data.empty() || !data_args.test_images.empty())
        test_set = load_split(data_args.test_data, data_args.test_images,
                              data_args.test_labels, data_args);
    } else {
      throw ctm::ConfigError(
          "no training data: pass --xor, --train-data, or --train-images/--train-labels");
    }

    if (hp.threshold <= 0)
      hp.threshold = static_cast<int>(std::lround(1.25 * hp.clauses_per_class));

    ctm::MulticlassModel model = ctm::MulticlassModel::create(
        hp, flat ? ctm::ModelKind::Flat : ctm::ModelKind::Convolutional,
        train_set.image_x, train_set.image_y, train_set.num_classes);

    std::ofstream log;
    if (!log_path.empty()) {
      log.open(log_path, std::ios::app);
      if (!log) throw ctm::Error("cannot open metrics log: " + log_path);
    }

    ctm::FitOptions options;
    options.epochs = hp.epochs;
    options.test = test_set ? &*test_set : nullptr;
    options.on_epoch = [&](const ctm::EpochMetrics& m) {
      std::cout << m.epoch << ',' << m.train_accuracy << ',' << m.test_accuracy << ','
                << m.seconds << '\n'
                << std::flush;
      if (log) {
        log << m.epoch << ',' << m.train_accuracy << ',' << m.test_accuracy << ','
            << m.seconds << '\n'
            << std::flush;
      }
    };

    ctm::Trainer trainer(model, workers);
    trainer.fit(train_set, options);
    ctm::save_model(model, model_out);
    std::cout << "model written to " << model_out << '\n';
    return 0;
  }

  if (eval->parsed()) {
    const ctm::MulticlassModel model = ctm::load_model(model_path);
    if (eval_args.test_data.empty() && eval_args.test_images.empty())
      throw ctm::ConfigError("no test data: pass --test-data or --test-images/--test-labels");
    ctm::Dataset test_set = load_split(eval_args.test_data, eval_args.test_images,
                                       eval_args.test_labels, eval_args);
    const ctm::EvalResult result = ctm::evaluate(model, test_set, eval_workers);
    std::cout << "accuracy: " << result.accuracy << '\n';
    print_confusion(result);
    return 0;
  }

  if (export_cmd->parsed()) {
    const ctm::MulticlassModel model = ctm::load_model(export_model);
    std::optional<ctm::Dataset> rates;
    if (!export_args.test_data.empty() || !export_args.test_images.empty())
      rates = load_split(export_args.test_data, export_args.test_images,
                         export_args.test_labels, export_args);
    const ctm::Dataset* rates_ptr = rates ? &*rates : nullptr;
    if (export_out.empty()) {
      ctm::export_report(model, rates_ptr, top_k, std::cout);
    } else {
      const int entries = ctm::export_report(model, rates_ptr, top_k, export_out);
      std::cout << entries << " clause patterns written to " << export_out << '\n';
    }
    return 0;
  }

  if (gen->parsed()) {
    const ctm::XorData data = ctm::generate_noisy_xor(gen_train, gen_test, gen_noise, gen_seed);
    const std::string train_path = gen_out + "_train.ctmd";
    const std::string test_path = gen_out + "_test.ctmd";
    ctm::save_dataset(data.train, train_path);
    ctm::save_dataset(data.test, test_path);
    std::cout << "wrote " << train_path << " and " << test_path << '\n';
    return 0;
  }

  if (bin->parsed()) {
    const ctm::Dataset data = ctm::assemble_dataset(
        ctm::load_idx_images(bin_images), ctm::load_idx_labels(bin_labels),
        bin_args.classes, bin_args.window, bin_args.thresh_c);
    ctm::save_dataset(data, bin_out);
    std::cout << "wrote " << bin_out << " (" << data.size() << " examples, "
              << data.image_x << "x" << data.image_y << ")\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ctm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
