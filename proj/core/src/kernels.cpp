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

#include "dnl/kernels.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "dnl/errors.hpp"
#include "dnl/instrument.hpp"

namespace dnl {
namespace {

using RowMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool is_depthwise(const ConvGeometry& g) {
  return g.groups == g.in_channels && g.out_channels == g.in_channels && g.in_per_group() == 1;
}

// Copies one channel into a zero-bordered (H + 2p) x (W + 2p) buffer.
void pad_channel(std::span<const float> src, int h, int w, int pad, std::vector<float>& dst) {
  const int pw = w + 2 * pad;
  dst.assign(static_cast<std::size_t>(h + 2 * pad) * pw, 0.0f);
  for (int i = 0; i < h; ++i) {
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(i) * w,
              src.begin() + static_cast<std::ptrdiff_t>(i + 1) * w,
              dst.begin() + static_cast<std::ptrdiff_t>(i + pad) * pw + pad);
  }
}

void depthwise_conv(const Tensor& x, const ConvSpec& spec, Tensor& y) {
  const auto& g = spec.geometry;
  const int h = x.height(), w = x.width();
  const int oh = y.height(), ow = y.width();
  const int pw = w + 2 * g.padding;
  std::vector<float> padded;
  for (int k = 0; k < g.in_channels; ++k) {
    pad_channel(x.channel(k), h, w, g.padding, padded);
    float* out = y.channel(k).data();
    const float* wk = spec.weight.data() + static_cast<std::size_t>(k) * g.kernel_h * g.kernel_w;
    for (int a = 0; a < g.kernel_h; ++a) {
      for (int b = 0; b < g.kernel_w; ++b) {
        const float wt = wk[a * g.kernel_w + b];
        for (int oi = 0; oi < oh; ++oi) {
          const float* row = padded.data() +
                             static_cast<std::size_t>(oi * g.stride + a * g.dilation) * pw +
                             b * g.dilation;
          float* orow = out + static_cast<std::size_t>(oi) * ow;
          if (g.stride == 1) {
            for (int oj = 0; oj < ow; ++oj) orow[oj] += wt * row[oj];
          } else {
            for (int oj = 0; oj < ow; ++oj) orow[oj] += wt * row[oj * g.stride];
          }
        }
      }
    }
  }
  instrument::record_madds(static_cast<std::uint64_t>(y.size()) * g.kernel_h * g.kernel_w);
}

// Unfolds one group of input channels into (ipg * kH * kW) x (oh * ow).
void im2col(const Tensor& x, const ConvGeometry& g, int first_channel, int oh, int ow,
            std::vector<float>& cols) {
  const int ipg = g.in_per_group();
  const int h = x.height(), w = x.width();
  const std::size_t npix = static_cast<std::size_t>(oh) * ow;
  cols.assign(static_cast<std::size_t>(ipg) * g.kernel_h * g.kernel_w * npix, 0.0f);
  std::size_t row = 0;
  for (int c = 0; c < ipg; ++c) {
    const auto plane = x.channel(first_channel + c);
    for (int a = 0; a < g.kernel_h; ++a) {
      for (int b = 0; b < g.kernel_w; ++b, ++row) {
        float* dst = cols.data() + row * npix;
        for (int oi = 0; oi < oh; ++oi) {
          const int ii = oi * g.stride - g.padding + a * g.dilation;
          if (ii < 0 || ii >= h) continue;
          for (int oj = 0; oj < ow; ++oj) {
            const int jj = oj * g.stride - g.padding + b * g.dilation;
            if (jj >= 0 && jj < w) {
              dst[static_cast<std::size_t>(oi) * ow + oj] =
                  plane[static_cast<std::size_t>(ii) * w + jj];
            }
          }
        }
      }
    }
  }
}

}  // namespace

void ConvGeometry::validate() const {
  if (in_channels < 1 || out_channels < 1 || kernel_h < 1 || kernel_w < 1 || stride < 1 ||
      dilation < 1 || padding < 0 || groups < 1) {
    throw ConfigError("conv geometry has non-positive fields");
  }
  if (in_channels % groups != 0 || out_channels % groups != 0) {
    throw ConfigError("conv channels (" + std::to_string(in_channels) + " -> " +
                      std::to_string(out_channels) + ") not divisible by groups " +
                      std::to_string(groups));
  }
}

Shape ConvGeometry::output_shape(int height, int width) const {
  const int oh = (height + 2 * padding - dilation * (kernel_h - 1) - 1) / stride + 1;
  const int ow = (width + 2 * padding - dilation * (kernel_w - 1) - 1) / stride + 1;
  if (height + 2 * padding - dilation * (kernel_h - 1) - 1 < 0 ||
      width + 2 * padding - dilation * (kernel_w - 1) - 1 < 0 || oh < 1 || ow < 1) {
    throw ConfigError("conv output would be empty for input " + std::to_string(height) + "x" +
                      std::to_string(width));
  }
  return Shape{out_channels, oh, ow};
}

ConvGeometry ConvGeometry::pointwise(int in, int out) { return ConvGeometry{in, out, 1, 1}; }

ConvGeometry ConvGeometry::depthwise(int channels, int kernel, int stride, int dilation) {
  return ConvGeometry{channels, channels, kernel,   kernel,
                      stride,   dilation, dilation * (kernel - 1) / 2, channels};
}

ConvGeometry ConvGeometry::dense(int in, int out, int kernel, int stride, int dilation) {
  return ConvGeometry{in, out, kernel, kernel, stride, dilation, dilation * (kernel - 1) / 2, 1};
}

Tensor conv2d(const Tensor& x, const ConvSpec& spec) {
  const auto& g = spec.geometry;
  g.validate();
  if (x.channels() != g.in_channels) {
    throw ConfigError("conv2d expects " + std::to_string(g.in_channels) + " input channels, got " +
                      to_string(x.shape()));
  }
  if (spec.weight.size() != g.weight_count()) {
    throw ConfigError("conv2d weight has " + std::to_string(spec.weight.size()) +
                      " values, expected " + std::to_string(g.weight_count()));
  }
  if (!spec.bias.empty() && spec.bias.size() != static_cast<std::size_t>(g.out_channels)) {
    throw ConfigError("conv2d bias length mismatch");
  }
  const Shape out_shape = g.output_shape(x.height(), x.width());
  Tensor y(out_shape);
  const int oh = out_shape.height, ow = out_shape.width;
  const int npix = oh * ow;

  if (is_depthwise(g)) {
    depthwise_conv(x, spec, y);
  } else {
    const int ipg = g.in_per_group();
    const int opg = g.out_channels / g.groups;
    const int kdim = ipg * g.kernel_h * g.kernel_w;
    const bool direct = g.kernel_h == 1 && g.kernel_w == 1 && g.stride == 1 && g.padding == 0;
    std::vector<float> cols;
    for (int grp = 0; grp < g.groups; ++grp) {
      std::span<const float> rhs;
      if (direct) {
        rhs = x.values().subspan(static_cast<std::size_t>(grp) * ipg * npix,
                                 static_cast<std::size_t>(ipg) * npix);
      } else {
        im2col(x, g, grp * ipg, oh, ow, cols);
        rhs = cols;
      }
      matmul(spec.weight.subspan(static_cast<std::size_t>(grp) * opg * kdim,
                                 static_cast<std::size_t>(opg) * kdim),
             rhs,
             y.values().subspan(static_cast<std::size_t>(grp) * opg * npix,
                                static_cast<std::size_t>(opg) * npix),
             opg, kdim, npix);
    }
  }

  if (!spec.bias.empty()) {
    for (int k = 0; k < g.out_channels; ++k) {
      const float b = spec.bias[k];
      for (float& v : y.channel(k)) v += b;
    }
  }
  return y;
}

Tensor batchnorm_infer(const Tensor& x, const BatchNormSpec& bn) {
  const auto c = static_cast<std::size_t>(x.channels());
  if (bn.mean.size() != c || bn.var.size() != c || bn.gamma.size() != c || bn.beta.size() != c) {
    throw ConfigError("batchnorm parameter length does not match " + std::to_string(c) +
                      " channels");
  }
  if (!(bn.eps >= 0.0f)) throw ConfigError("batchnorm eps must be >= 0");
  Tensor y(x.shape());
  for (std::size_t k = 0; k < c; ++k) {
    const double denom = static_cast<double>(bn.var[k]) + bn.eps;
    if (!(bn.var[k] >= 0.0f) || !(denom > 0.0)) {
      throw ConfigError("batchnorm variance must be >= 0 with var + eps > 0");
    }
    const auto scale = static_cast<float>(bn.gamma[k] / std::sqrt(denom));
    const auto shift = static_cast<float>(bn.beta[k] - static_cast<double>(bn.mean[k]) * scale);
    const auto src = x.channel(static_cast<int>(k));
    auto dst = y.channel(static_cast<int>(k));
    for (std::size_t n = 0; n < src.size(); ++n) dst[n] = src[n] * scale + shift;
  }
  instrument::record_madds(2 * static_cast<std::uint64_t>(x.size()));
  return y;
}

void relu6_inplace(Tensor& x) {
  for (float& v : x.values()) v = std::min(std::max(v, 0.0f), 6.0f);
}

Tensor relu6(const Tensor& x) {
  Tensor y = x;
  relu6_inplace(y);
  return y;
}

Tensor sigmoid(const Tensor& x) {
  Tensor y(x.shape());
  auto src = x.values();
  auto dst = y.values();
  for (std::size_t n = 0; n < src.size(); ++n) dst[n] = 1.0f / (1.0f + std::exp(-src[n]));
  instrument::record_madds(x.size());
  return y;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ConfigError("add: shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  Tensor y(a.shape());
  auto pa = a.values();
  auto pb = b.values();
  auto out = y.values();
  for (std::size_t n = 0; n < pa.size(); ++n) out[n] = pa[n] + pb[n];
  return y;
}

void softmax_rows_inplace(std::span<float> values, int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    float* row = values.data() + static_cast<std::size_t>(r) * cols;
    const float peak = *std::max_element(row, row + cols);
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) {
      row[c] = std::exp(row[c] - peak);
      sum += row[c];
    }
    const double inv = 1.0 / sum;
    for (int c = 0; c < cols; ++c) row[c] = static_cast<float>(row[c] * inv);
  }
  instrument::record_madds(static_cast<std::uint64_t>(rows) * cols);
}

Matrix softmax_rows(Matrix m) {
  softmax_rows_inplace(m.values, m.rows, m.cols);
  return m;
}

Tensor global_avg_pool(const Tensor& x) {
  Tensor y(Shape{x.channels(), 1, 1});
  for (int k = 0; k < x.channels(); ++k) {
    double sum = 0.0;
    for (float v : x.channel(k)) sum += v;
    y.at(k, 0, 0) = static_cast<float>(sum / static_cast<double>(x.shape().plane()));
  }
  instrument::record_madds(x.size());
  return y;
}

Tensor bilinear_resize(const Tensor& x, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1) throw ConfigError("resize target must be >= 1");
  const int h = x.height(), w = x.width();
  Tensor y(Shape{x.channels(), out_height, out_width});
  const double sy = out_height > 1 ? static_cast<double>(h - 1) / (out_height - 1) : 0.0;
  const double sx = out_width > 1 ? static_cast<double>(w - 1) / (out_width - 1) : 0.0;

  std::vector<int> x0(out_width), x1(out_width);
  std::vector<float> tx(out_width);
  for (int oj = 0; oj < out_width; ++oj) {
    const double src = oj * sx;
    x0[oj] = std::min(static_cast<int>(src), w - 1);
    x1[oj] = std::min(x0[oj] + 1, w - 1);
    tx[oj] = static_cast<float>(src - x0[oj]);
  }
  for (int k = 0; k < x.channels(); ++k) {
    for (int oi = 0; oi < out_height; ++oi) {
      const double src = oi * sy;
      const int y0 = std::min(static_cast<int>(src), h - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const auto ty = static_cast<float>(src - y0);
      for (int oj = 0; oj < out_width; ++oj) {
        const float top = x.at(k, y0, x0[oj]) + tx[oj] * (x.at(k, y0, x1[oj]) - x.at(k, y0, x0[oj]));
        const float bot = x.at(k, y1, x0[oj]) + tx[oj] * (x.at(k, y1, x1[oj]) - x.at(k, y1, x0[oj]));
        y.at(k, oi, oj) = top + ty * (bot - top);
      }
    }
  }
  // Two horizontal lerps and one vertical lerp per output element.
  instrument::record_madds(3 * static_cast<std::uint64_t>(y.size()));
  return y;
}

Tensor broadcast_spatial(const Tensor& x, int height, int width) {
  if (x.height() != 1 || x.width() != 1) throw ConfigError("broadcast_spatial expects C x 1 x 1");
  Tensor y(Shape{x.channels(), height, width});
  for (int k = 0; k < x.channels(); ++k) {
    auto dst = y.channel(k);
    std::fill(dst.begin(), dst.end(), x.at(k, 0, 0));
  }
  return y;
}

void matmul(std::span<const float> a, std::span<const float> b, std::span<float> c, int m, int k,
            int n, bool transpose_b) {
  Eigen::Map<const RowMat> lhs(a.data(), m, k);
  Eigen::Map<RowMat> out(c.data(), m, n);
  if (transpose_b) {
    Eigen::Map<const RowMat> rhs(b.data(), n, k);
    out.noalias() = lhs * rhs.transpose();
  } else {
    Eigen::Map<const RowMat> rhs(b.data(), k, n);
    out.noalias() = lhs * rhs;
  }
  instrument::record_madds(static_cast<std::uint64_t>(m) * n * k);
}

}  // namespace dnl
