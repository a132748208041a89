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

#include <algorithm>
#include <cmath>
#include <vector>

#include "dnl/nonlocal.hpp"

namespace dnl {

// Loop transcription of the layer equations. Positions inside a sub-region
// are indexed p = k * n + t (channel-major), with t running along the divided
// axis. Everything accumulates in double; nothing here calls the batched
// kernels used by dnl_layer_forward.
Tensor dnl_reference_naive(const Tensor& x, const DnlLayerParams& p) {
  p.validate(x.shape());
  const bool vertical = p.axis == SplitAxis::kVertical;
  const int C = p.channels;
  const int L = p.feature_len;
  const int KD = p.key_dim;
  const int VD = p.value_dim;

  // Element e of the feature vector at (channel k, position t).
  auto feature = [&](int k, int t, int e) -> double {
    return vertical ? x.at(k, e, t) : x.at(k, t, e);
  };

  Tensor out = x;
  const int extent = vertical ? x.width() : x.height();
  const int splits = p.splits;
  int begin = 0;
  for (int r = 0; r < splits; ++r) {
    const int n = extent / splits + (r < extent % splits ? 1 : 0);
    const int rows = C * n;

    std::vector<double> theta(static_cast<std::size_t>(rows) * KD);
    std::vector<double> phi(static_cast<std::size_t>(rows) * KD);
    std::vector<double> g(static_cast<std::size_t>(rows) * VD);
    for (int k = 0; k < C; ++k) {
      for (int t = 0; t < n; ++t) {
        const int row = k * n + t;
        for (int d = 0; d < KD; ++d) {
          double a = p.theta_bias[k * KD + d];
          double b = p.phi_bias[k * KD + d];
          for (int e = 0; e < L; ++e) {
            const double v = feature(k, begin + t, e);
            a += p.theta_weight[(static_cast<std::size_t>(k) * KD + d) * L + e] * v;
            b += p.phi_weight[(static_cast<std::size_t>(k) * KD + d) * L + e] * v;
          }
          theta[static_cast<std::size_t>(row) * KD + d] = a;
          phi[static_cast<std::size_t>(row) * KD + d] = b;
        }
        for (int d = 0; d < VD; ++d) {
          double a = p.g_bias[k * VD + d];
          for (int e = 0; e < L; ++e) {
            a += feature(k, begin + t, e) *
                 p.g_weight[(static_cast<std::size_t>(k) * L + e) * VD + d];
          }
          g[static_cast<std::size_t>(row) * VD + d] = a;
        }
      }
    }

    std::vector<double> attn(static_cast<std::size_t>(rows) * rows);
    for (int pi = 0; pi < rows; ++pi) {
      for (int qi = 0; qi < rows; ++qi) {
        double dot = 0.0;
        for (int d = 0; d < KD; ++d) {
          dot += theta[static_cast<std::size_t>(pi) * KD + d] *
                 phi[static_cast<std::size_t>(qi) * KD + d];
        }
        attn[static_cast<std::size_t>(pi) * rows + qi] = dot;
      }
      double* row = attn.data() + static_cast<std::size_t>(pi) * rows;
      const double peak = *std::max_element(row, row + rows);
      double sum = 0.0;
      for (int qi = 0; qi < rows; ++qi) {
        row[qi] = std::exp(row[qi] - peak);
        sum += row[qi];
      }
      for (int qi = 0; qi < rows; ++qi) row[qi] /= sum;
    }

    for (int k = 0; k < C; ++k) {
      for (int t = 0; t < n; ++t) {
        const int pi = k * n + t;
        std::vector<double> y(VD, 0.0);
        for (int d = 0; d < VD; ++d) {
          for (int qi = 0; qi < rows; ++qi) {
            y[d] += attn[static_cast<std::size_t>(pi) * rows + qi] *
                    g[static_cast<std::size_t>(qi) * VD + d];
          }
        }
        for (int e = 0; e < L; ++e) {
          double res = p.f_bias[k * L + e];
          for (int d = 0; d < VD; ++d) {
            res += y[d] * p.f_weight[(static_cast<std::size_t>(k) * VD + d) * L + e];
          }
          float& o = vertical ? out.at(k, e, begin + t) : out.at(k, begin + t, e);
          o = static_cast<float>(static_cast<double>(o) + res);
        }
      }
    }
    begin += n;
  }
  return out;
}

}  // namespace dnl
