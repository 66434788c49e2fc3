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
#include "ctm/data_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "ctm/binarize.hpp"

namespace ctm {

namespace {

constexpr std::array<std::uint8_t, 4> kModelMagic = {'C', 'T', 'M', 'M'};
constexpr std::array<std::uint8_t, 4> kDatasetMagic = {'C', 'T', 'M', 'D'};
constexpr std::uint16_t kModelVersion = 1;
constexpr std::uint16_t kDatasetVersion = 1;

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

// Little-endian container builder.
struct ByteWriter {
  std::vector<std::uint8_t> bytes;

  void u8(std::uint8_t v) { bytes.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
};

// Bounds-checked little-endian reader; running past the end is a ParseError.
struct ByteReader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw ParseError("truncated container");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(bytes[pos + i]) << (8 * i);
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
};

void append_crc(ByteWriter& w) {
  // Covers everything after the 4-byte magic.
  w.u32(crc32(w.bytes.data() + 4, w.bytes.size() - 4));
}

// Splits off and verifies the trailing CRC; returns the payload end offset.
std::size_t check_crc(const std::vector<std::uint8_t>& bytes, const char* what) {
  if (bytes.size() < 8) throw ParseError(std::string("truncated ") + what + " container");
  const std::size_t end = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(bytes[end + i]) << (8 * i);
  if (crc32(bytes.data() + 4, end - 4) != stored)
    throw ChecksumError(std::string(what) + " container failed its checksum");
  return end;
}

void check_magic(const std::vector<std::uint8_t>& bytes,
                 const std::array<std::uint8_t, 4>& magic, const char* what) {
  if (bytes.size() < 4 || !std::equal(magic.begin(), magic.end(), bytes.begin()))
    throw ParseError(std::string("not a ") + what + " container");
}

}  // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int b = 0; b < 8; ++b) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i)
    crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("read failed: " + path);
  return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

std::vector<GrayImage> parse_idx_images(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) throw ParseError("truncated IDX file: missing magic");
  const std::uint32_t magic = be32(bytes.data());
  if (magic == 0x00000801u)
    throw ParseError("wrong record type: IDX label file passed to the image loader");
  if (magic != 0x00000803u)
    throw ParseError("not an IDX image file (bad magic)");
  if (bytes.size() < 16) throw ParseError("truncated IDX image header");
  const std::uint32_t count = be32(bytes.data() + 4);
  const std::uint32_t rows = be32(bytes.data() + 8);
  const std::uint32_t cols = be32(bytes.data() + 12);
  if (rows == 0 || cols == 0) throw ParseError("IDX image dimensions must be positive");
  const std::size_t expected =
      16 + static_cast<std::size_t>(count) * rows * cols;
  if (bytes.size() < expected) throw ParseError("truncated IDX image payload");
  if (bytes.size() > expected) throw ParseError("trailing bytes after IDX image payload");

  std::vector<GrayImage> images(count);
  std::size_t off = 16;
  for (std::uint32_t i = 0; i < count; ++i) {
    GrayImage& im = images[i];
    im.x = static_cast<int>(cols);
    im.y = static_cast<int>(rows);
    im.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                     bytes.begin() + static_cast<std::ptrdiff_t>(off + rows * cols));
    off += static_cast<std::size_t>(rows) * cols;
  }
  return images;
}

std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) throw ParseError("truncated IDX file: missing magic");
  const std::uint32_t magic = be32(bytes.data());
  if (magic == 0x00000803u)
    throw ParseError("wrong record type: IDX image file passed to the label loader");
  if (magic != 0x00000801u)
    throw ParseError("not an IDX label file (bad magic)");
  if (bytes.size() < 8) throw ParseError("truncated IDX label header");
  const std::uint32_t count = be32(bytes.data() + 4);
  const std::size_t expected = 8 + static_cast<std::size_t>(count);
  if (bytes.size() < expected) throw ParseError("truncated IDX label payload");
  if (bytes.size() > expected) throw ParseError("trailing bytes after IDX label payload");

  std::vector<int> labels(count);
  for (std::uint32_t i = 0; i < count; ++i) labels[i] = bytes[8 + i];
  return labels;
}

std::vector<GrayImage> load_idx_images(const std::string& path) {
  return parse_idx_images(read_file(path));
}

std::vector<int> load_idx_labels(const std::string& path) {
  return parse_idx_labels(read_file(path));
}

Dataset assemble_dataset(const std::vector<GrayImage>& images,
                         const std::vector<int>& labels, int num_classes,
                         int window, int c) {
  if (images.size() != labels.size())
    throw ParseError("image/label count mismatch: " + std::to_string(images.size()) +
                     " images vs " + std::to_string(labels.size()) + " labels");
  if (images.empty()) throw ParseError("empty dataset");
  Dataset d;
  d.image_x = images[0].x;
  d.image_y = images[0].y;
  d.layers = 1;
  d.num_classes = num_classes;
  d.labels = labels;
  d.images.reserve(images.size());
  for (const GrayImage& im : images)
    d.images.push_back(adaptive_gaussian_binarize(im, window, c));
  d.validate();
  return d;
}

std::vector<std::uint8_t> serialize_model(const MulticlassModel& model) {
  const Hyperparams& hp = model.params;
  const int half = hp.clauses_per_class / 2;
  const int literals = model.literal_count();

  ByteWriter w;
  w.bytes.reserve(64 + model_payload_bytes(model));
  w.bytes.insert(w.bytes.end(), kModelMagic.begin(), kModelMagic.end());
  w.u16(kModelVersion);
  w.u8(static_cast<std::uint8_t>(model.kind));
  w.u8(hp.weighting ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(hp.clauses_per_class));
  w.u32(static_cast<std::uint32_t>(hp.threshold));
  w.u32(static_cast<std::uint32_t>(hp.states_per_action));
  w.u32(static_cast<std::uint32_t>(hp.filter_size));
  w.u32(static_cast<std::uint32_t>(hp.stride));
  w.u32(static_cast<std::uint32_t>(hp.layers));
  w.u32(static_cast<std::uint32_t>(hp.epochs));
  w.f64(hp.specificity);
  w.u64(hp.rng_seed);
  w.u32(static_cast<std::uint32_t>(model.layout.image_x));
  w.u32(static_cast<std::uint32_t>(model.layout.image_y));
  w.u32(static_cast<std::uint32_t>(model.num_classes()));

  for (const ClassModel& cm : model.classes) {
    for (const TaBank* bank : {&cm.positive, &cm.negative})
      for (int j = 0; j < half; ++j)
        for (int k = 0; k < literals; ++k) w.i16(bank->state(j, k));
    for (const auto* weights : {&cm.positive_weights, &cm.negative_weights})
      for (std::int32_t v : *weights) w.i32(v);
  }
  append_crc(w);
  return w.bytes;
}

MulticlassModel deserialize_model(const std::vector<std::uint8_t>& bytes) {
  check_magic(bytes, kModelMagic, "model");
  const std::size_t payload_end = check_crc(bytes, "model");

  ByteReader r{bytes, 4};
  const std::uint16_t version = r.u16();
  if (version != kModelVersion)
    throw FormatVersionError("unsupported model container version " +
                             std::to_string(version));
  const std::uint8_t kind_byte = r.u8();
  if (kind_byte > 1) throw ParseError("invalid model kind byte");
  const ModelKind kind = static_cast<ModelKind>(kind_byte);
  Hyperparams hp;
  hp.weighting = r.u8() != 0;
  hp.clauses_per_class = static_cast<int>(r.u32());
  hp.threshold = static_cast<int>(r.u32());
  hp.states_per_action = static_cast<int>(r.u32());
  hp.filter_size = static_cast<int>(r.u32());
  hp.stride = static_cast<int>(r.u32());
  hp.layers = static_cast<int>(r.u32());
  hp.epochs = static_cast<int>(r.u32());
  hp.specificity = r.f64();
  hp.rng_seed = r.u64();
  const int image_x = static_cast<int>(r.u32());
  const int image_y = static_cast<int>(r.u32());
  const int num_classes = static_cast<int>(r.u32());

  MulticlassModel model;
  model.params = hp;
  model.kind = kind;
  try {
    hp.validate();
    if (kind == ModelKind::Convolutional) {
      hp.validate_for_image(image_x, image_y);
      model.layout = PatchLayout::convolution(image_x, image_y, hp.layers,
                                              hp.filter_size, hp.stride);
    } else {
      model.layout = PatchLayout::whole_image(image_x, image_y, hp.layers);
    }
  } catch (const ConfigError& e) {
    throw ParseError(std::string("model container carries invalid parameters: ") + e.what());
  }
  if (num_classes < 2) throw ParseError("model container has fewer than two classes");

  const int half = hp.clauses_per_class / 2;
  const int literals = 2 * model.layout.num_vars();
  model.classes.resize(static_cast<std::size_t>(num_classes));
  std::vector<std::int16_t> states(static_cast<std::size_t>(half) * literals);
  for (ClassModel& cm : model.classes) {
    cm.positive = TaBank(half, literals, hp.states_per_action);
    cm.negative = TaBank(half, literals, hp.states_per_action);
    for (TaBank* bank : {&cm.positive, &cm.negative}) {
      for (auto& s : states) s = r.i16();
      try {
        bank->load_states(states);
      } catch (const std::out_of_range& e) {
        throw ParseError(std::string("model container holds an invalid automaton state: ") +
                         e.what());
      }
    }
    for (auto* weights : {&cm.positive_weights, &cm.negative_weights}) {
      weights->resize(static_cast<std::size_t>(half));
      for (auto& v : *weights) {
        v = r.i32();
        if (v < 1) throw ParseError("model container holds a clause weight below 1");
      }
    }
  }
  if (r.pos != payload_end) throw ParseError("model container has trailing payload bytes");
  return model;
}

void save_model(const MulticlassModel& model, const std::string& path) {
  write_file(path, serialize_model(model));
}

MulticlassModel load_model(const std::string& path) {
  return deserialize_model(read_file(path));
}

std::vector<std::uint8_t> serialize_dataset(const Dataset& data) {
  data.validate();
  if (data.num_classes > 65535) throw ConfigError("dataset cache supports at most 65535 classes");
  const std::size_t bits = static_cast<std::size_t>(data.image_x) * data.image_y * data.layers;
  const std::size_t bytes_per_image = (bits + 7) / 8;

  ByteWriter w;
  w.bytes.reserve(32 + data.size() * (bytes_per_image + 2));
  w.bytes.insert(w.bytes.end(), kDatasetMagic.begin(), kDatasetMagic.end());
  w.u16(kDatasetVersion);
  w.u32(static_cast<std::uint32_t>(data.image_x));
  w.u32(static_cast<std::uint32_t>(data.image_y));
  w.u32(static_cast<std::uint32_t>(data.layers));
  w.u32(static_cast<std::uint32_t>(data.num_classes));
  w.u32(static_cast<std::uint32_t>(data.size()));
  for (int label : data.labels) w.u16(static_cast<std::uint16_t>(label));
  for (const BitImage& im : data.images) {
    std::size_t base = w.bytes.size();
    w.bytes.resize(base + bytes_per_image, 0);
    for (std::size_t i = 0; i < bits; ++i)
      if (im.bits.get(i)) w.bytes[base + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  append_crc(w);
  return w.bytes;
}

Dataset deserialize_dataset(const std::vector<std::uint8_t>& bytes) {
  check_magic(bytes, kDatasetMagic, "dataset");
  const std::size_t payload_end = check_crc(bytes, "dataset");

  ByteReader r{bytes, 4};
  const std::uint16_t version = r.u16();
  if (version != kDatasetVersion)
    throw FormatVersionError("unsupported dataset container version " +
                             std::to_string(version));
  Dataset d;
  d.image_x = static_cast<int>(r.u32());
  d.image_y = static_cast<int>(r.u32());
  d.layers = static_cast<int>(r.u32());
  d.num_classes = static_cast<int>(r.u32());
  const std::uint32_t count = r.u32();
  if (d.image_x < 1 || d.image_y < 1 || d.layers < 1)
    throw ParseError("dataset container carries invalid dimensions");

  d.labels.resize(count);
  for (auto& label : d.labels) label = r.u16();

  const std::size_t bits = static_cast<std::size_t>(d.image_x) * d.image_y * d.layers;
  const std::size_t bytes_per_image = (bits + 7) / 8;
  d.images.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    r.need(bytes_per_image);
    BitImage im(d.image_x, d.image_y, d.layers);
    for (std::size_t b = 0; b < bits; ++b)
      if ((bytes[r.pos + b / 8] >> (b % 8)) & 1u) im.bits.set(b);
    r.pos += bytes_per_image;
    d.images.push_back(std::move(im));
  }
  if (r.pos != payload_end) throw ParseError("dataset container has trailing payload bytes");
  d.validate();
  return d;
}

void save_dataset(const Dataset& data, const std::string& path) {
  write_file(path, serialize_dataset(data));
}

Dataset load_dataset(const std::string& path) {
  return deserialize_dataset(read_file(path));
}

}  // namespace ctm
