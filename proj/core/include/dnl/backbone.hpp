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
#include <optional>
#include <string>

#include "dnl/kernels.hpp"
#include "dnl/nonlocal.hpp"
#include "dnl/plan.hpp"
#include "dnl/weights.hpp"

namespace dnl {

// conv -> optional BN -> optional ReLU6. A non-empty `scope` names the layer
// for instrumentation.
struct ConvBnParams {
  ConvSpec conv;
  std::optional<BatchNormSpec> bn;
  bool relu6 = true;
  std::string scope;

  std::uint64_t param_count() const;
};

Tensor conv_bn_forward(const Tensor& x, const ConvBnParams& p);

// expand (1x1, omitted when t == 1) -> depthwise 3x3 -> linear project, with
// an identity skip when stride is 1 and channel counts match.
struct IrBlockParams {
  std::optional<ConvBnParams> expand;
  ConvBnParams depthwise;
  ConvBnParams project;

  int in_channels() const;
  int out_channels() const { return project.conv.geometry.out_channels; }
  bool has_skip() const;
};

Tensor inverted_residual_forward(const Tensor& x, const IrBlockParams& p);

struct EncoderOutput {
  Tensor low_level;
  Tensor high_level;
};

// Views into `store` for one planned layer; throw IncompleteModelError or
// ConfigError when a parameter is absent or misshapen.
ConvBnParams bind_conv_unit(const ConvUnit& unit, const WeightStore& store, float bn_eps);
IrBlockParams bind_ir_block(const IrBlockPlan& block, const WeightStore& store, float bn_eps);
DnlLayerParams bind_dnl_layer(const DnlLayerPlan& layer, const WeightStore& store);

// Stem, seven IR modules and the configured DNL modules. The low-level
// feature is the output of the low-level module (after its DNL module, when
// one is placed there); the high-level feature is the last module's output.
EncoderOutput encoder_forward(const Tensor& image, const NetworkPlan& plan,
                              const WeightStore& store);
EncoderOutput encoder_forward(const Tensor& image, const NetworkConfig& cfg,
                              const WeightStore& store);

}  // namespace dnl
