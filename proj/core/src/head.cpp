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

#include "dnl/head.hpp"

#include "dnl/errors.hpp"
#include "dnl/instrument.hpp"

namespace dnl {

AsppParams bind_aspp(const AsppPlan& plan, const WeightStore& store, float bn_eps) {
  AsppParams p;
  for (const auto& b : plan.branches) p.branches.push_back(bind_conv_unit(b, store, bn_eps));
  p.pool = bind_conv_unit(plan.pool, store, bn_eps);
  return p;
}

DecoderParams bind_decoder(const DecoderPlan& plan, const WeightStore& store, float bn_eps) {
  DecoderParams p;
  p.high = bind_conv_unit(plan.high, store, bn_eps);
  p.low = bind_conv_unit(plan.low, store, bn_eps);
  p.predict = bind_conv_unit(plan.predict, store, bn_eps);
  p.out_height = plan.output.height;
  p.out_width = plan.output.width;
  return p;
}

Tensor aspp_forward(const Tensor& x, const AsppParams& p) {
  std::vector<Tensor> parts;
  parts.reserve(p.branches.size() + 1);
  for (const auto& branch : p.branches) parts.push_back(conv_bn_forward(x, branch));
  {
    // Pooling, conv, BN and broadcast all belong to the pooling layer.
    std::optional<LayerScope> scope;
    if (!p.pool.scope.empty()) scope.emplace(p.pool.scope);
    const Tensor pooled = global_avg_pool(x);
    parts.push_back(broadcast_spatial(conv_bn_forward(pooled, p.pool), x.height(), x.width()));
  }
  return concat_channels(parts);
}

Tensor decoder_forward(const Tensor& high, const Tensor& low, const DecoderParams& p) {
  if (high.height() != low.height() || high.width() != low.width()) {
    throw ConfigError("decoder inputs differ in spatial size: " + to_string(high.shape()) +
                      " vs " + to_string(low.shape()));
  }
  const Tensor fused[] = {conv_bn_forward(high, p.high), conv_bn_forward(low, p.low)};
  const Tensor logits = conv_bn_forward(concat_channels(fused), p.predict);
  Tensor prob;
  {
    LayerScope scope("decoder.sigmoid");
    prob = sigmoid(logits);
  }
  LayerScope scope("decoder.upsample");
  return bilinear_resize(prob, p.out_height, p.out_width);
}

Tensor network_forward(const Tensor& image, const NetworkPlan& plan, const WeightStore& store) {
  const EncoderOutput features = encoder_forward(image, plan, store);
  const Tensor context = aspp_forward(features.high_level, bind_aspp(plan.aspp, store, plan.bn_eps));
  return decoder_forward(context, features.low_level,
                         bind_decoder(plan.decoder, store, plan.bn_eps));
}

Tensor network_forward(const Tensor& image, const NetworkConfig& cfg, const WeightStore& store) {
  return network_forward(image, build_plan(cfg), store);
}

Network::Network(NetworkConfig cfg, WeightStore store)
    : cfg_(std::move(cfg)), plan_(build_plan(cfg_)), store_(std::move(store)) {
  check_complete(store_, plan_);
}

}  // namespace dnl
