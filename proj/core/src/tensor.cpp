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

#include "dnl/tensor.hpp"

#include <algorithm>
#include <cstring>

#include "dnl/errors.hpp"

namespace dnl {

std::string to_string(const Shape& s) {
  return std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
         std::to_string(s.width);
}

namespace {

void check_dims(const Shape& s) {
  if (s.channels < 1 || s.height < 1 || s.width < 1) {
    throw ConfigError("tensor dims must be >= 1, got " + to_string(s));
  }
}

}  // namespace

Tensor::Tensor(Shape shape, float fill) : shape_(shape) {
  check_dims(shape_);
  values_.assign(shape_.size(), fill);
}

Tensor::Tensor(Shape shape, std::vector<float> values) : shape_(shape), values_(std::move(values)) {
  check_dims(shape_);
  if (values_.size() != shape_.size()) {
    throw ConfigError("tensor data length " + std::to_string(values_.size()) +
                      " does not match shape " + to_string(shape_));
  }
}

Matrix::Matrix(int r, int c, std::vector<float> v) : rows(r), cols(c), values(std::move(v)) {
  if (r < 0 || c < 0 || values.size() != static_cast<std::size_t>(r) * c) {
    throw ConfigError("matrix data length does not match " + std::to_string(r) + "x" +
                      std::to_string(c));
  }
}

bool Tensor::identical(const Tensor& other) const {
  return shape_ == other.shape_ &&
         std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(float)) == 0;
}

Tensor concat_channels(std::span<const Tensor> parts) {
  if (parts.empty()) throw ConfigError("concat_channels: no inputs");
  const int h = parts.front().height();
  const int w = parts.front().width();
  int c = 0;
  for (const auto& p : parts) {
    if (p.height() != h || p.width() != w) {
      throw ConfigError("concat_channels: spatial mismatch " + to_string(p.shape()) + " vs " +
                        to_string(parts.front().shape()));
    }
    c += p.channels();
  }
  Tensor out(Shape{c, h, w});
  float* dst = out.data();
  for (const auto& p : parts) dst = std::copy(p.values().begin(), p.values().end(), dst);
  return out;
}

Tensor slice_width(const Tensor& x, int begin, int count) {
  if (begin < 0 || count < 1 || begin + count > x.width()) {
    throw ConfigError("slice_width out of range");
  }
  Tensor out(Shape{x.channels(), x.height(), count});
  for (int k = 0; k < x.channels(); ++k)
    for (int i = 0; i < x.height(); ++i) {
      const float* src = &x.at(k, i, begin);
      std::copy(src, src + count, &out.at(k, i, 0));
    }
  return out;
}

Tensor slice_height(const Tensor& x, int begin, int count) {
  if (begin < 0 || count < 1 || begin + count > x.height()) {
    throw ConfigError("slice_height out of range");
  }
  Tensor out(Shape{x.channels(), count, x.width()});
  for (int k = 0; k < x.channels(); ++k) {
    const float* src = &x.at(k, begin, 0);
    std::copy(src, src + static_cast<std::size_t>(count) * x.width(), &out.at(k, 0, 0));
  }
  return out;
}

Tensor concat_width(std::span<const Tensor> parts) {
  if (parts.empty()) throw ConfigError("concat_width: no inputs");
  const int c = parts.front().channels();
  const int h = parts.front().height();
  int w = 0;
  for (const auto& p : parts) {
    if (p.channels() != c || p.height() != h) throw ConfigError("concat_width: shape mismatch");
    w += p.width();
  }
  Tensor out(Shape{c, h, w});
  int offset = 0;
  for (const auto& p : parts) {
    for (int k = 0; k < c; ++k)
      for (int i = 0; i < h; ++i) {
        const float* src = &p.at(k, i, 0);
        std::copy(src, src + p.width(), &out.at(k, i, offset));
      }
    offset += p.width();
  }
  return out;
}

Tensor concat_height(std::span<const Tensor> parts) {
  if (parts.empty()) throw ConfigError("concat_height: no inputs");
  const int c = parts.front().channels();
  const int w = parts.front().width();
  int h = 0;
  for (const auto& p : parts) {
    if (p.channels() != c || p.width() != w) throw ConfigError("concat_height: shape mismatch");
    h += p.height();
  }
  Tensor out(Shape{c, h, w});
  int offset = 0;
  for (const auto& p : parts) {
    for (int k = 0; k < c; ++k) {
      const float* src = &p.at(k, 0, 0);
      std::copy(src, src + p.shape().plane(), &out.at(k, offset, 0));
    }
    offset += p.height();
  }
  return out;
}

Tensor transpose_spatial(const Tensor& x) {
  Tensor out(Shape{x.channels(), x.width(), x.height()});
  for (int k = 0; k < x.channels(); ++k)
    for (int i = 0; i < x.height(); ++i)
      for (int j = 0; j < x.width(); ++j) out.at(k, j, i) = x.at(k, i, j);
  return out;
}

}  // namespace dnl
