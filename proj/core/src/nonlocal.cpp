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

#include "dnl/nonlocal.hpp"

#include <Eigen/Core>
#include <cmath>

#include "dnl/errors.hpp"
#include "dnl/instrument.hpp"
#include "dnl/kernels.hpp"
#include "dnl/random.hpp"

namespace dnl {
namespace {

using RowMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;
using ConstRowVec = Eigen::Map<const Eigen::RowVectorXf>;

void expect_size(std::span<const float> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw ConfigError(std::string("DNL ") + what + " has " + std::to_string(v.size()) +
                      " values, expected " + std::to_string(n));
  }
}

// Residual of the undivided layer on one region.
Tensor region_residual(const Tensor& region, const DnlLayerParams& p) {
  const Matrix features = gather_features(region, p.axis);
  const Matrix theta = embed_features(features, p.channels, p.theta_weight, p.theta_bias, p.key_dim);
  const Matrix phi = embed_features(features, p.channels, p.phi_weight, p.phi_bias, p.key_dim);
  const Matrix g = embed_features_right(features, p.channels, p.g_weight, p.g_bias, p.value_dim);
  Matrix affinity = pairwise_affinity(theta, phi);
  softmax_rows_inplace(affinity.values, affinity.rows, affinity.cols);
  return attention_apply(affinity, g, p.f_weight, p.f_bias, region.shape(), p.axis);
}

}  // namespace

std::string_view to_string(SplitAxis axis) {
  return axis == SplitAxis::kVertical ? "vertical" : "horizontal";
}

SplitAxis parse_split_axis(std::string_view text) {
  if (text == "vertical") return SplitAxis::kVertical;
  if (text == "horizontal") return SplitAxis::kHorizontal;
  throw ConfigError("unknown DNL layer type '" + std::string(text) + "'");
}

int DnlLayerParams::split_extent(const Shape& input) const {
  return axis == SplitAxis::kVertical ? input.width : input.height;
}

void DnlLayerParams::validate(const Shape& input) const {
  if (channels < 1 || feature_len < 1 || key_dim < 1 || value_dim < 1) {
    throw ConfigError("DNL dims must be >= 1");
  }
  if (input.channels != channels) {
    throw ConfigError("DNL layer expects " + std::to_string(channels) + " channels, input is " +
                      to_string(input));
  }
  const int len = axis == SplitAxis::kVertical ? input.height : input.width;
  if (len != feature_len) {
    throw ConfigError("DNL " + std::string(to_string(axis)) + " layer expects feature length " +
                      std::to_string(feature_len) + ", input is " + to_string(input));
  }
  const int extent = split_extent(input);
  if (splits < 1 || splits > extent) {
    throw ConfigError("DNL split count " + std::to_string(splits) + " outside [1, " +
                      std::to_string(extent) + "]");
  }
  const auto c = static_cast<std::size_t>(channels);
  expect_size(theta_weight, c * key_dim * feature_len, "theta weight");
  expect_size(theta_bias, c * key_dim, "theta bias");
  expect_size(phi_weight, c * key_dim * feature_len, "phi weight");
  expect_size(phi_bias, c * key_dim, "phi bias");
  expect_size(g_weight, c * feature_len * value_dim, "g weight");
  expect_size(g_bias, c * value_dim, "g bias");
  expect_size(f_weight, c * value_dim * feature_len, "f weight");
  expect_size(f_bias, c * feature_len, "f bias");
}

std::uint64_t DnlLayerParams::param_count(bool with_bias) const {
  const std::uint64_t c = channels;
  std::uint64_t n = 2 * c * feature_len * (static_cast<std::uint64_t>(key_dim) + value_dim);
  if (with_bias) n += c * (2ull * key_dim + value_dim + feature_len);
  return n;
}

DnlLayerWeights::DnlLayerWeights(SplitAxis axis_, int c, int len, int key, int value)
    : axis(axis_), channels(c), feature_len(len), key_dim(key), value_dim(value) {
  const auto cs = static_cast<std::size_t>(c);
  theta_weight.assign(cs * key * len, 0.0f);
  theta_bias.assign(cs * key, 0.0f);
  phi_weight.assign(cs * key * len, 0.0f);
  phi_bias.assign(cs * key, 0.0f);
  g_weight.assign(cs * len * value, 0.0f);
  g_bias.assign(cs * value, 0.0f);
  f_weight.assign(cs * value * len, 0.0f);
  f_bias.assign(cs * len, 0.0f);
}

DnlLayerWeights DnlLayerWeights::random(SplitAxis axis, int c, int len, int key, int value,
                                        std::uint64_t seed) {
  DnlLayerWeights w(axis, c, len, key, value);
  UniformRng rng(seed, "dnl-layer");
  const float in_bound = 1.0f / std::sqrt(static_cast<float>(len));
  const float out_bound = 1.0f / std::sqrt(static_cast<float>(value));
  for (auto* v : {&w.theta_weight, &w.theta_bias, &w.phi_weight, &w.phi_bias, &w.g_weight,
                  &w.g_bias}) {
    rng.fill(*v, -in_bound, in_bound);
  }
  rng.fill(w.f_weight, -out_bound, out_bound);
  rng.fill(w.f_bias, -out_bound, out_bound);
  return w;
}

void DnlLayerWeights::zero_output_projection() {
  std::fill(f_weight.begin(), f_weight.end(), 0.0f);
  std::fill(f_bias.begin(), f_bias.end(), 0.0f);
}

DnlLayerParams DnlLayerWeights::view(int splits) const {
  return DnlLayerParams{axis,         channels,   feature_len, key_dim,  value_dim, splits,
                        theta_weight, theta_bias, phi_weight,  phi_bias, g_weight,  g_bias,
                        f_weight,     f_bias};
}

std::vector<int> split_sizes(int extent, int splits) {
  if (splits < 1 || splits > extent) {
    throw ConfigError("split count " + std::to_string(splits) + " outside [1, " +
                      std::to_string(extent) + "]");
  }
  std::vector<int> sizes(splits, extent / splits);
  for (int r = 0; r < extent % splits; ++r) ++sizes[r];
  return sizes;
}

std::vector<Tensor> split_subregions(const Tensor& x, SplitAxis axis, int splits) {
  const bool vertical = axis == SplitAxis::kVertical;
  const auto sizes = split_sizes(vertical ? x.width() : x.height(), splits);
  std::vector<Tensor> parts;
  parts.reserve(sizes.size());
  int offset = 0;
  for (int n : sizes) {
    parts.push_back(vertical ? slice_width(x, offset, n) : slice_height(x, offset, n));
    offset += n;
  }
  return parts;
}

Tensor merge_subregions(std::span<const Tensor> parts, SplitAxis axis) {
  return axis == SplitAxis::kVertical ? concat_width(parts) : concat_height(parts);
}

Matrix gather_features(const Tensor& x, SplitAxis axis) {
  const int c = x.channels(), h = x.height(), w = x.width();
  if (axis == SplitAxis::kHorizontal) {
    // Rows of each channel are already contiguous feature vectors.
    Matrix m(c * h, w);
    std::copy(x.values().begin(), x.values().end(), m.values.begin());
    return m;
  }
  Matrix m(c * w, h);
  for (int k = 0; k < c; ++k) {
    ConstRowMap plane(x.channel(k).data(), h, w);
    RowMap(m.values.data() + static_cast<std::size_t>(k) * w * h, w, h) = plane.transpose();
  }
  return m;
}

Matrix embed_features(const Matrix& features, int channels, std::span<const float> weight,
                      std::span<const float> bias, int d_out) {
  const int d_in = features.cols;
  if (features.rows % channels != 0) throw ConfigError("feature rows not divisible by channels");
  const int n = features.rows / channels;
  expect_size(weight, static_cast<std::size_t>(channels) * d_out * d_in, "embedding weight");
  expect_size(bias, static_cast<std::size_t>(channels) * d_out, "embedding bias");
  Matrix out(features.rows, d_out);
  for (int k = 0; k < channels; ++k) {
    ConstRowMap x(features.values.data() + static_cast<std::size_t>(k) * n * d_in, n, d_in);
    ConstRowMap w(weight.data() + static_cast<std::size_t>(k) * d_out * d_in, d_out, d_in);
    ConstRowVec b(bias.data() + static_cast<std::size_t>(k) * d_out, d_out);
    RowMap y(out.values.data() + static_cast<std::size_t>(k) * n * d_out, n, d_out);
    y.noalias() = x * w.transpose();
    y.rowwise() += b;
  }
  instrument::record_madds(static_cast<std::uint64_t>(features.rows) * d_in * d_out);
  return out;
}

Matrix embed_features_right(const Matrix& features, int channels, std::span<const float> weight,
                            std::span<const float> bias, int d_out) {
  const int d_in = features.cols;
  if (features.rows % channels != 0) throw ConfigError("feature rows not divisible by channels");
  const int n = features.rows / channels;
  expect_size(weight, static_cast<std::size_t>(channels) * d_in * d_out, "embedding weight");
  expect_size(bias, static_cast<std::size_t>(channels) * d_out, "embedding bias");
  Matrix out(features.rows, d_out);
  for (int k = 0; k < channels; ++k) {
    ConstRowMap x(features.values.data() + static_cast<std::size_t>(k) * n * d_in, n, d_in);
    ConstRowMap w(weight.data() + static_cast<std::size_t>(k) * d_in * d_out, d_in, d_out);
    ConstRowVec b(bias.data() + static_cast<std::size_t>(k) * d_out, d_out);
    RowMap y(out.values.data() + static_cast<std::size_t>(k) * n * d_out, n, d_out);
    y.noalias() = x * w;
    y.rowwise() += b;
  }
  instrument::record_madds(static_cast<std::uint64_t>(features.rows) * d_in * d_out);
  return out;
}

Matrix channel_embed(const Tensor& x, std::span<const float> weight, std::span<const float> bias,
                     int d_out, SplitAxis axis) {
  return embed_features(gather_features(x, axis), x.channels(), weight, bias, d_out);
}

Matrix pairwise_affinity(const Matrix& theta, const Matrix& phi) {
  if (theta.cols != phi.cols) throw ConfigError("affinity: embedding widths differ");
  Matrix a(theta.rows, phi.rows);
  matmul(theta.values, phi.values, a.values, theta.rows, theta.cols, phi.rows,
         /*transpose_b=*/true);
  return a;
}

Tensor attention_apply(const Matrix& attention, const Matrix& g, std::span<const float> f_weight,
                       std::span<const float> f_bias, const Shape& region, SplitAxis axis) {
  const bool vertical = axis == SplitAxis::kVertical;
  const int c = region.channels;
  const int n = vertical ? region.width : region.height;
  const int len = vertical ? region.height : region.width;
  const int value_dim = g.cols;
  if (attention.rows != c * n || attention.cols != g.rows || g.rows != c * n) {
    throw ConfigError("attention_apply: inconsistent shapes");
  }
  Matrix y(attention.rows, value_dim);
  matmul(attention.values, g.values, y.values, attention.rows, attention.cols, value_dim);

  // Per-channel projection back to feature length; rows are positions.
  const Matrix r = embed_features_right(y, c, f_weight, f_bias, len);
  Tensor residual(region);
  for (int k = 0; k < c; ++k) {
    ConstRowMap rk(r.values.data() + static_cast<std::size_t>(k) * n * len, n, len);
    RowMap out(residual.channel(k).data(), region.height, region.width);
    if (vertical) {
      out = rk.transpose();
    } else {
      out = rk;
    }
  }
  return residual;
}

Tensor dnl_layer_forward(const Tensor& x, const DnlLayerParams& p) {
  p.validate(x.shape());
  if (p.splits == 1) return add(x, region_residual(x, p));

  auto regions = split_subregions(x, p.axis, p.splits);
  for (auto& region : regions) region = add(region, region_residual(region, p));
  return merge_subregions(regions, p.axis);
}

Tensor dnl_module_forward(const Tensor& x, const DnlModuleConfig& cfg) {
  if (cfg.layers.empty()) throw ConfigError("DNL module needs at least one layer");
  Tensor out = dnl_layer_forward(x, cfg.layers.front());
  for (std::size_t n = 1; n < cfg.layers.size(); ++n) out = dnl_layer_forward(out, cfg.layers[n]);
  return out;
}

}  // namespace dnl
