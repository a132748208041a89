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
#include <string_view>
#include <vector>

#include "dnl/tensor.hpp"

namespace dnl {

// Vertical layers attend over the C x W column vectors I[k, :, j] (length H)
// and divide along W. Horizontal layers attend over the C x H row vectors
// I[k, i, :] (length W) and divide along H.
enum class SplitAxis { kVertical, kHorizontal };

std::string_view to_string(SplitAxis axis);
SplitAxis parse_split_axis(std::string_view text);

// Default embedding width for a feature vector of length `extent`.
inline int default_embed_dim(int extent) { return extent / 2 > 0 ? extent / 2 : 1; }

// Non-owning view of one depthwise non-local layer. `feature_len` is the
// feature vector length (H for vertical, W for horizontal). Shapes:
//   theta_weight, phi_weight: C x key_dim x feature_len
//   theta_bias, phi_bias:     C x key_dim
//   g_weight:                 C x feature_len x value_dim
//   g_bias:                   C x value_dim
//   f_weight:                 C x value_dim x feature_len
//   f_bias:                   C x feature_len
struct DnlLayerParams {
  SplitAxis axis = SplitAxis::kVertical;
  int channels = 1;
  int feature_len = 1;
  int key_dim = 1;
  int value_dim = 1;
  int splits = 1;

  std::span<const float> theta_weight;
  std::span<const float> theta_bias;
  std::span<const float> phi_weight;
  std::span<const float> phi_bias;
  std::span<const float> g_weight;
  std::span<const float> g_bias;
  std::span<const float> f_weight;
  std::span<const float> f_bias;

  // Extent of the divided axis for an input of this shape.
  int split_extent(const Shape& input) const;
  // Throws ConfigError unless the params fit `input`.
  void validate(const Shape& input) const;
  std::uint64_t param_count(bool with_bias = true) const;
};

// Owning storage behind a DnlLayerParams view.
struct DnlLayerWeights {
  SplitAxis axis = SplitAxis::kVertical;
  int channels = 1;
  int feature_len = 1;
  int key_dim = 1;
  int value_dim = 1;

  std::vector<float> theta_weight, theta_bias;
  std::vector<float> phi_weight, phi_bias;
  std::vector<float> g_weight, g_bias;
  std::vector<float> f_weight, f_bias;

  DnlLayerWeights() = default;
  DnlLayerWeights(SplitAxis axis, int channels, int feature_len, int key_dim, int value_dim);

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per embedding; fan_in is
  // feature_len for theta/phi/g and value_dim for f.
  static DnlLayerWeights random(SplitAxis axis, int channels, int feature_len, int key_dim,
                                int value_dim, std::uint64_t seed);

  void zero_output_projection();
  DnlLayerParams view(int splits = 1) const;
};

// Sizes of the s contiguous sub-regions of an axis of length `extent`; the
// first (extent mod s) regions get one extra element.
std::vector<int> split_sizes(int extent, int splits);

// Sub-tensors holding all channels and a contiguous slice of W (vertical) or
// H (horizontal).
std::vector<Tensor> split_subregions(const Tensor& x, SplitAxis axis, int splits);
Tensor merge_subregions(std::span<const Tensor> parts, SplitAxis axis);

// Stacks the feature vectors of `x` into a (C * n) x feature_len matrix,
// channel-major. n is W for vertical and H for horizontal.
Matrix gather_features(const Tensor& x, SplitAxis axis);

// Applies the per-channel affine map out_row = W_k * row + B_k to a gathered
// feature matrix. `weight` is C x d_out x d_in, `bias` is C x d_out.
Matrix embed_features(const Matrix& features, int channels, std::span<const float> weight,
                      std::span<const float> bias, int d_out);

// Same, but with `weight` laid out C x d_in x d_out (row * W_k + B_k), the
// layout of the g and f embeddings.
Matrix embed_features_right(const Matrix& features, int channels, std::span<const float> weight,
                            std::span<const float> bias, int d_out);

// gather_features followed by embed_features.
Matrix channel_embed(const Tensor& x, std::span<const float> weight, std::span<const float> bias,
                     int d_out, SplitAxis axis);

// A = theta * phi^T.
Matrix pairwise_affinity(const Matrix& theta, const Matrix& phi);

// Residual for one region: y = attention * g, then per channel y_k * W_f,k +
// B_f,k, scattered back into a tensor of `region` shape.
Tensor attention_apply(const Matrix& attention, const Matrix& g, std::span<const float> f_weight,
                       std::span<const float> f_bias, const Shape& region, SplitAxis axis);

// O = x + residual, computed independently per sub-region with shared weights.
Tensor dnl_layer_forward(const Tensor& x, const DnlLayerParams& p);

// Ordered residual layers; by default one vertical then one horizontal.
struct DnlModuleConfig {
  std::vector<DnlLayerParams> layers;
};

Tensor dnl_module_forward(const Tensor& x, const DnlModuleConfig& cfg);

// Direct nested-loop transcription of the layer equations, accumulating in
// double. Intended for small inputs; serves as the ground-truth oracle.
Tensor dnl_reference_naive(const Tensor& x, const DnlLayerParams& p);

}  // namespace dnl
