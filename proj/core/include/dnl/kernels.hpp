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

#include <cstdint>
#include <span>

#include "dnl/tensor.hpp"

namespace dnl {

struct ConvGeometry {
  int in_channels = 1;
  int out_channels = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride = 1;
  int dilation = 1;
  int padding = 0;
  int groups = 1;

  int in_per_group() const { return in_channels / groups; }
  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_per_group() * kernel_h * kernel_w;
  }
  // Throws ConfigError when the grouping is inconsistent.
  void validate() const;
  // Output spatial dims for an H x W input; throws ConfigError if < 1.
  Shape output_shape(int height, int width) const;

  static ConvGeometry pointwise(int in, int out);
  static ConvGeometry depthwise(int channels, int kernel, int stride, int dilation);
  static ConvGeometry dense(int in, int out, int kernel, int stride, int dilation);
};

// Non-owning view over convolution parameters. `weight` is laid out as
// (out_channels, in_per_group, kernel_h, kernel_w); `bias` is empty or has
// out_channels entries.
struct ConvSpec {
  ConvGeometry geometry;
  std::span<const float> weight;
  std::span<const float> bias;
};

struct BatchNormSpec {
  std::span<const float> mean;
  std::span<const float> var;
  std::span<const float> gamma;
  std::span<const float> beta;
  float eps = 1e-5f;
};

// Zero-padded cross-correlation. Padded taps are executed (and counted) like
// any other tap, so the MAdds count is out_elements * in_per_group * kH * kW.
Tensor conv2d(const Tensor& x, const ConvSpec& spec);

Tensor batchnorm_infer(const Tensor& x, const BatchNormSpec& bn);

Tensor relu6(const Tensor& x);
void relu6_inplace(Tensor& x);

Tensor sigmoid(const Tensor& x);

// Elementwise a + b; shapes must match.
Tensor add(const Tensor& a, const Tensor& b);

// Row-wise softmax with max subtraction and 64-bit denominators.
Matrix softmax_rows(Matrix m);
void softmax_rows_inplace(std::span<float> values, int rows, int cols);

Tensor global_avg_pool(const Tensor& x);

// Bilinear interpolation with the align-corners convention.
Tensor bilinear_resize(const Tensor& x, int out_height, int out_width);

// Repeats a C x 1 x 1 tensor over an H x W grid.
Tensor broadcast_spatial(const Tensor& x, int height, int width);

// C = A * B for row-major matrices, with A (m x k) and B (k x n). Optionally
// B is read transposed (B given as n x k). Records m*n*k MAdds.
void matmul(std::span<const float> a, std::span<const float> b, std::span<float> c, int m, int k,
            int n, bool transpose_b = false);

}  // namespace dnl
