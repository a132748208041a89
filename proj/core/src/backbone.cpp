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

#include "dnl/backbone.hpp"

#include "dnl/errors.hpp"
#include "dnl/instrument.hpp"

namespace dnl {
namespace {

std::vector<std::uint32_t> per_channel(int c) { return {static_cast<std::uint32_t>(c)}; }

}  // namespace

std::uint64_t ConvBnParams::param_count() const {
  std::uint64_t n = conv.weight.size() + conv.bias.size();
  if (bn) n += bn->gamma.size() + bn->beta.size();
  return n;
}

Tensor conv_bn_forward(const Tensor& x, const ConvBnParams& p) {
  std::optional<LayerScope> scope;
  if (!p.scope.empty()) scope.emplace(p.scope, p.param_count());
  Tensor y = conv2d(x, p.conv);
  if (p.bn) y = batchnorm_infer(y, *p.bn);
  if (p.relu6) relu6_inplace(y);
  return y;
}

int IrBlockParams::in_channels() const {
  return expand ? expand->conv.geometry.in_channels : depthwise.conv.geometry.in_channels;
}

bool IrBlockParams::has_skip() const {
  return depthwise.conv.geometry.stride == 1 && in_channels() == out_channels();
}

Tensor inverted_residual_forward(const Tensor& x, const IrBlockParams& p) {
  Tensor h = p.expand ? conv_bn_forward(x, *p.expand) : x;
  h = conv_bn_forward(h, p.depthwise);
  h = conv_bn_forward(h, p.project);
  if (p.has_skip()) return add(x, h);
  return h;
}

ConvBnParams bind_conv_unit(const ConvUnit& unit, const WeightStore& store, float bn_eps) {
  const auto& g = unit.geometry;
  ConvBnParams p;
  p.scope = unit.name;
  p.relu6 = unit.relu6;
  p.conv.geometry = g;
  p.conv.weight = store.values(unit.name + ".weight",
                               {static_cast<std::uint32_t>(g.out_channels),
                                static_cast<std::uint32_t>(g.in_per_group()),
                                static_cast<std::uint32_t>(g.kernel_h),
                                static_cast<std::uint32_t>(g.kernel_w)});
  if (unit.bias) p.conv.bias = store.values(unit.name + ".bias", per_channel(g.out_channels));
  if (unit.batchnorm) {
    BatchNormSpec bn;
    bn.gamma = store.values(unit.name + ".bn.gamma", per_channel(g.out_channels));
    bn.beta = store.values(unit.name + ".bn.beta", per_channel(g.out_channels));
    bn.mean = store.values(unit.name + ".bn.mean", per_channel(g.out_channels));
    bn.var = store.values(unit.name + ".bn.var", per_channel(g.out_channels));
    bn.eps = bn_eps;
    p.bn = bn;
  }
  return p;
}

IrBlockParams bind_ir_block(const IrBlockPlan& block, const WeightStore& store, float bn_eps) {
  IrBlockParams p;
  if (block.expand) p.expand = bind_conv_unit(*block.expand, store, bn_eps);
  p.depthwise = bind_conv_unit(block.depthwise, store, bn_eps);
  p.project = bind_conv_unit(block.project, store, bn_eps);
  return p;
}

DnlLayerParams bind_dnl_layer(const DnlLayerPlan& l, const WeightStore& store) {
  const auto c = static_cast<std::uint32_t>(l.shape.channels);
  const auto len = static_cast<std::uint32_t>(l.feature_len);
  const auto key = static_cast<std::uint32_t>(l.key_dim);
  const auto val = static_cast<std::uint32_t>(l.value_dim);
  DnlLayerParams p;
  p.axis = l.axis;
  p.channels = l.shape.channels;
  p.feature_len = l.feature_len;
  p.key_dim = l.key_dim;
  p.value_dim = l.value_dim;
  p.splits = l.splits;
  p.theta_weight = store.values(l.name + ".theta.weight", {c, key, len});
  p.theta_bias = store.values(l.name + ".theta.bias", {c, key});
  p.phi_weight = store.values(l.name + ".phi.weight", {c, key, len});
  p.phi_bias = store.values(l.name + ".phi.bias", {c, key});
  p.g_weight = store.values(l.name + ".g.weight", {c, len, val});
  p.g_bias = store.values(l.name + ".g.bias", {c, val});
  p.f_weight = store.values(l.name + ".f.weight", {c, val, len});
  p.f_bias = store.values(l.name + ".f.bias", {c, len});
  return p;
}

EncoderOutput encoder_forward(const Tensor& image, const NetworkPlan& plan,
                              const WeightStore& store) {
  if (image.shape() != plan.input) {
    throw ConfigError("encoder expects input " + to_string(plan.input) + ", got " +
                      to_string(image.shape()));
  }
  const auto& enc = plan.encoder;
  EncoderOutput out;
  Tensor x = conv_bn_forward(image, bind_conv_unit(enc.stem, store, plan.bn_eps));
  for (const auto& mod : enc.modules) {
    for (const auto& block : mod.blocks) {
      x = inverted_residual_forward(x, bind_ir_block(block, store, plan.bn_eps));
    }
    for (const auto& layer : mod.dnl) {
      const DnlLayerParams p = bind_dnl_layer(layer, store);
      LayerScope scope(layer.name, p.param_count());
      x = dnl_layer_forward(x, p);
    }
    if (mod.index == enc.low_level_module) out.low_level = x;
  }
  out.high_level = std::move(x);
  return out;
}

EncoderOutput encoder_forward(const Tensor& image, const NetworkConfig& cfg,
                              const WeightStore& store) {
  return encoder_forward(image, build_plan(cfg), store);
}

}  // namespace dnl
