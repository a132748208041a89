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
#include <string>
#include <vector>

#include "dnl/config.hpp"
#include "dnl/instrument.hpp"
#include "dnl/kernels.hpp"
#include "dnl/plan.hpp"
#include "dnl/weights.hpp"

namespace dnl {

// Counting convention, shared by the closed forms and the kernels:
//   one multiply-accumulate = 1 MAdd; bias and residual additions are free;
//   conv = out_elements * in_per_group * kH * kW (padded taps included);
//   batch norm = 2 per element; softmax = 1 per affinity entry;
//   sigmoid = 1 per element; global average pool = 1 per input element;
//   bilinear resize = 3 per output element; ReLU6 and concatenation = 0.

struct MaddsEntry {
  std::string layer;
  std::uint64_t madds = 0;
  std::uint64_t params = 0;
};

struct MaddsReport {
  std::vector<MaddsEntry> entries;

  std::uint64_t total_madds() const;
  std::uint64_t total_params() const;
  const MaddsEntry* find(const std::string& layer) const;
};

// Inputs of one DNL layer. key_dim / value_dim are H^A / H' for a vertical
// layer and W^A / W' for a horizontal one.
struct ComplexityInputs {
  int channels = 1;
  int height = 1;
  int width = 1;
  int key_dim = 1;
  int value_dim = 1;
  int splits = 1;
  SplitAxis axis = SplitAxis::kVertical;

  void validate() const;
};

// Vertical: sum_r (C w_r)^2 (H^A + H' + 1) + 2 C H W (H^A + H'), where w_r are
// the sub-region widths; with s dividing W this is
// (1/s) C^2 W^2 (H^A + H' + 1) + 2 C H W (H^A + H'). Horizontal is symmetric.
std::uint64_t dnl_layer_madds(const ComplexityInputs& in);

struct DnlSpace {
  std::uint64_t params = 0;         // embedding weights, biases excluded
  std::uint64_t affinity = 0;       // entries over all sub-region affinity maps
  std::uint64_t intermediates = 0;  // affinity + g(I) + y + residual
};

DnlSpace dnl_layer_space(const ComplexityInputs& in);

std::uint64_t conv_madds(const ConvGeometry& g, const Shape& output);
std::uint64_t conv_params(const ConvGeometry& g, bool bias);
std::uint64_t batchnorm_madds(const Shape& s);
std::uint64_t softmax_madds(std::uint64_t rows, std::uint64_t cols);
std::uint64_t sigmoid_madds(const Shape& s);
std::uint64_t global_avg_pool_madds(const Shape& input);
std::uint64_t bilinear_resize_madds(const Shape& output);

// Closed-form per-layer report, in forward order, named like the
// instrumentation scopes.
MaddsReport network_madds(const NetworkPlan& plan);
MaddsReport network_madds(const NetworkConfig& cfg);

// Learnable scalars including biases and BN affine parameters.
std::uint64_t count_params(const NetworkConfig& cfg);

// Runs one forward pass with counting enabled and reports what the kernels
// actually executed.
MaddsReport instrument_trace(const NetworkConfig& cfg, const WeightStore& store,
                             const Tensor& image);
MaddsReport report_from_counter(const OpCounter& counter);

struct LayerMismatch {
  std::string layer;
  std::uint64_t expected = 0;
  std::uint64_t actual = 0;
};

// Layers whose MAdds differ, including layers present on only one side.
std::vector<LayerMismatch> diff_reports(const MaddsReport& expected, const MaddsReport& actual);

// Human-readable table with a totals section.
std::string format_report(const MaddsReport& report, const std::string& title);
// One `layer<TAB>madds<TAB>params` line per entry.
std::string format_tsv(const MaddsReport& report);

}  // namespace dnl
