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
#include <string>
#include <vector>

#include "ctm/classifier.hpp"
#include "ctm/image.hpp"

namespace ctm {

// IDX (big-endian) ingestion, the MNIST-family distribution format.
// Image files carry magic 0x00000803, label files 0x00000801; sizes are
// validated against the declared counts and anything malformed raises a
// typed error instead of a partial result.
std::vector<GrayImage> parse_idx_images(const std::vector<std::uint8_t>& bytes);
std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes);
std::vector<GrayImage> load_idx_images(const std::string& path);
std::vector<int> load_idx_labels(const std::string& path);

// Binarizes IDX grayscale images and pairs them with labels. Throws when the
// counts disagree or a label falls outside num_classes.
Dataset assemble_dataset(const std::vector<GrayImage>& images,
                         const std::vector<int>& labels, int num_classes,
                         int window, int c);

// Model container: little-endian fixed-width fields, format version, full
// hyperparameters, automaton states and clause weights per class, CRC32 over
// everything after the magic. load(save(m)) reproduces m bit-identically.
std::vector<std::uint8_t> serialize_model(const MulticlassModel& model);
MulticlassModel deserialize_model(const std::vector<std::uint8_t>& bytes);
void save_model(const MulticlassModel& model, const std::string& path);
MulticlassModel load_model(const std::string& path);

// Dataset cache container, same conventions; the lossless round-trip spares
// re-binarization between runs.
std::vector<std::uint8_t> serialize_dataset(const Dataset& data);
Dataset deserialize_dataset(const std::vector<std::uint8_t>& bytes);
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

std::uint32_t crc32(const std::uint8_t* data, std::size_t size);

}  // namespace ctm
