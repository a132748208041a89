// Copyright 2026 The DNL Saliency Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dnl {

struct Shape {
  int channels = 1;
  int height = 1;
  int width = 1;

  std::size_t size() const {
    return static_cast<std::size_t>(channels) * height * width;
  }
  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }

  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

// Dense C x H x W feature map of 32-bit floats, row-major in (k, i, j).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> values);

  const Shape& shape() const { return shape_; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::size_t size() const { return values_.size(); }

  float& at(int k, int i, int j) {
    return values_[(static_cast<std::size_t>(k) * shape_.height + i) * shape_.width + j];
  }
  const float& at(int k, int i, int j) const {
    return values_[(static_cast<std::size_t>(k) * shape_.height + i) * shape_.width + j];
  }

  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }
  float* data() { return values_.data(); }
  const float* data() const { return values_.data(); }

  std::span<float> channel(int k) {
    return std::span<float>(values_).subspan(static_cast<std::size_t>(k) * shape_.plane(),
                                             shape_.plane());
  }
  std::span<const float> channel(int k) const {
    return std::span<const float>(values_).subspan(static_cast<std::size_t>(k) * shape_.plane(),
                                                   shape_.plane());
  }

  // Bitwise comparison of shape and contents.
  bool identical(const Tensor& other) const;

 private:
  Shape shape_{};
  std::vector<float> values_ = std::vector<float>(1, 0.0f);
};

// Row-major R x N matrix used for affinity maps and embedded features.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<float> values;

  Matrix() = default;
  Matrix(int r, int c, float fill = 0.0f)
      : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}
  // Throws ConfigError when v.size() != r * c.
  Matrix(int r, int c, std::vector<float> v);

  float& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  float operator()(int r, int c) const {
    return values[static_cast<std::size_t>(r) * cols + c];
  }
  std::span<float> row(int r) {
    return std::span<float>(values).subspan(static_cast<std::size_t>(r) * cols, cols);
  }
  std::span<const float> row(int r) const {
    return std::span<const float>(values).subspan(static_cast<std::size_t>(r) * cols, cols);
  }
};

// Channel-wise concatenation; all inputs must share H and W.
Tensor concat_channels(std::span<const Tensor> parts);

// Slices/concatenates along width (axis 2) or height (axis 1).
Tensor slice_width(const Tensor& x, int begin, int count);
Tensor slice_height(const Tensor& x, int begin, int count);
Tensor concat_width(std::span<const Tensor> parts);
Tensor concat_height(std::span<const Tensor> parts);

// Swaps the two spatial axes: out(k, j, i) = x(k, i, j).
Tensor transpose_spatial(const Tensor& x);

}  // namespace dnl
