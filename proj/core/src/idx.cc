// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iterator>
#include <vector>

#include "fedsched/errors.h"
#include "fedsched/streaming.h"

namespace fedsched {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr int kNumDigitClasses = 10;

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf,
                        std::size_t offset, const std::filesystem::path& path) {
  if (offset + 4 > buf.size()) {
    throw FormatError(path.string() + ": truncated header");
  }
  return (std::uint32_t{buf[offset]} << 24) |
         (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

}  // namespace

std::vector<Sample> load_idx_corpus(const std::filesystem::path& images_path,
                                    const std::filesystem::path& labels_path) {
  const auto images = read_all(images_path);
  const auto labels = read_all(labels_path);

  if (read_be32(images, 0, images_path) != kImageMagic) {
    throw FormatError(images_path.string() + ": bad magic for IDX images");
  }
  if (read_be32(labels, 0, labels_path) != kLabelMagic) {
    throw FormatError(labels_path.string() + ": bad magic for IDX labels");
  }
  const std::size_t count = read_be32(images, 4, images_path);
  const std::size_t rows = read_be32(images, 8, images_path);
  const std::size_t cols = read_be32(images, 12, images_path);
  const std::size_t label_count = read_be32(labels, 4, labels_path);
  if (rows == 0 || cols == 0) {
    throw FormatError(images_path.string() + ": zero image dimension");
  }
  if (label_count != count) {
    throw FormatError("image/label count mismatch: " + std::to_string(count) +
                      " vs " + std::to_string(label_count));
  }
  const std::size_t pixels = rows * cols;
  if (images.size() < 16 + count * pixels) {
    throw FormatError(images_path.string() + ": truncated pixel data");
  }
  if (labels.size() < 8 + count) {
    throw FormatError(labels_path.string() + ": truncated label data");
  }

  std::vector<Sample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int label = labels[8 + i];
    if (label >= kNumDigitClasses) {
      throw FormatError(labels_path.string() + ": label " +
                        std::to_string(label) + " at index " +
                        std::to_string(i) + " outside [0, 10)");
    }
    out[i].label = label;
    out[i].features.resize(pixels);
    const unsigned char* src = images.data() + 16 + i * pixels;
    for (std::size_t p = 0; p < pixels; ++p) {
      out[i].features[p] = static_cast<float>(src[p]) / 255.0f;
    }
  }
  return out;
}

}  // namespace fedsched
