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

#include "dnl/plan.hpp"

#include "dnl/errors.hpp"

namespace dnl {
namespace {

ConvUnit make_unit(std::string name, const ConvGeometry& g, const Shape& input, bool bn = true,
                   bool act = true, bool bias = false) {
  ConvUnit u;
  u.name = std::move(name);
  u.geometry = g;
  u.input = input;
  u.output = g.output_shape(input.height, input.width);
  u.batchnorm = bn;
  u.relu6 = act;
  u.bias = bias;
  return u;
}

std::vector<DnlLayerPlan> plan_dnl(const std::string& prefix, const Shape& shape,
                                   const DnlPlacement& cfg) {
  std::vector<DnlLayerPlan> layers;
  for (SplitAxis axis : cfg.layers) {
    DnlLayerPlan l;
    l.name = prefix + "." + std::string(to_string(axis));
    l.axis = axis;
    l.shape = shape;
    const bool vertical = axis == SplitAxis::kVertical;
    l.feature_len = vertical ? shape.height : shape.width;
    l.key_dim = cfg.key_dim > 0 ? cfg.key_dim : default_embed_dim(l.feature_len);
    l.value_dim = cfg.value_dim > 0 ? cfg.value_dim : default_embed_dim(l.feature_len);
    l.splits = cfg.split;
    const int extent = vertical ? shape.width : shape.height;
    if (l.splits > extent) {
      throw ConfigError("DNL split " + std::to_string(l.splits) + " exceeds extent " +
                        std::to_string(extent) + " at " + l.name);
    }
    layers.push_back(std::move(l));
  }
  return layers;
}

}  // namespace

NetworkPlan build_plan(const NetworkConfig& cfg) {
  cfg.validate();
  NetworkPlan plan;
  plan.input = Shape{3, cfg.input_height, cfg.input_width};
  plan.bn_eps = cfg.bn_eps;

  auto& enc = plan.encoder;
  enc.low_level_module = cfg.encoder.low_level_module;
  enc.stem = make_unit("encoder.stem", ConvGeometry::dense(3, cfg.encoder.stem_channels, 3, 2, 1),
                       plan.input);
  Shape x = enc.stem.output;

  for (std::size_t m = 0; m < cfg.encoder.modules.size(); ++m) {
    const auto& spec = cfg.encoder.modules[m];
    IrModulePlan mod;
    mod.index = static_cast<int>(m) + 1;
    const std::string mprefix = "encoder.ir" + std::to_string(mod.index);
    for (int b = 0; b < spec.repeats; ++b) {
      IrBlockPlan block;
      block.name = mprefix + ".block" + std::to_string(b);
      const int stride = b == 0 ? spec.stride : 1;
      const int in_c = x.channels;
      const int hidden = in_c * spec.expansion;
      Shape h = x;
      if (spec.expansion != 1) {
        block.expand = make_unit(block.name + ".expand", ConvGeometry::pointwise(in_c, hidden), x);
        h = block.expand->output;
      }
      block.depthwise = make_unit(block.name + ".depthwise",
                                  ConvGeometry::depthwise(hidden, 3, stride, spec.dilation), h);
      block.project = make_unit(block.name + ".project",
                                ConvGeometry::pointwise(hidden, spec.channels),
                                block.depthwise.output, true, /*act=*/false);
      block.skip = stride == 1 && in_c == spec.channels;
      x = block.project.output;
      mod.blocks.push_back(std::move(block));
    }
    for (int after : cfg.encoder.dnl.after_modules) {
      if (after == mod.index) {
        mod.dnl = plan_dnl("encoder.dnl" + std::to_string(mod.index), x, cfg.encoder.dnl);
      }
    }
    mod.output = x;
    enc.modules.push_back(std::move(mod));
  }

  auto& aspp = plan.aspp;
  aspp.input = x;
  const int ac = cfg.aspp.channels;
  aspp.branches.push_back(
      make_unit("aspp.branch0", ConvGeometry::pointwise(x.channels, ac), x));
  for (std::size_t r = 0; r < cfg.aspp.rates.size(); ++r) {
    aspp.branches.push_back(make_unit("aspp.branch" + std::to_string(r + 1),
                                      ConvGeometry::dense(x.channels, ac, 3, 1, cfg.aspp.rates[r]),
                                      x));
  }
  aspp.pool = make_unit("aspp.pool", ConvGeometry::pointwise(x.channels, ac),
                        Shape{x.channels, 1, 1});
  aspp.output = Shape{ac * static_cast<int>(aspp.branches.size() + 1), x.height, x.width};

  auto& dec = plan.decoder;
  const Shape low = enc.modules[cfg.encoder.low_level_module - 1].output;
  dec.high = make_unit("decoder.high", ConvGeometry::pointwise(aspp.output.channels,
                                                               cfg.decoder.high_channels),
                       aspp.output, true, /*act=*/false);
  dec.low = make_unit("decoder.low", ConvGeometry::pointwise(low.channels, cfg.decoder.low_channels),
                      low, true, /*act=*/false);
  if (dec.high.output.height != dec.low.output.height ||
      dec.high.output.width != dec.low.output.width) {
    throw ConfigError("decoder inputs differ in spatial size");
  }
  const Shape fused{cfg.decoder.high_channels + cfg.decoder.low_channels, dec.high.output.height,
                    dec.high.output.width};
  dec.predict = make_unit("decoder.predict", ConvGeometry::pointwise(fused.channels, 1), fused,
                          /*bn=*/false, /*act=*/false, /*bias=*/true);
  dec.sigmoid_name = "decoder.sigmoid";
  dec.upsample_name = "decoder.upsample";
  dec.logits = dec.predict.output;
  dec.output = Shape{1, cfg.input_height, cfg.input_width};
  return plan;
}

}  // namespace dnl
