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

#include <string>
#include <vector>

#include "dnl/backbone.hpp"

namespace dnl {

// Parallel branches (a 1x1 conv and the atrous 3x3 convs) plus an
// image-pooling branch, concatenated along channels.
struct AsppParams {
  std::vector<ConvBnParams> branches;
  ConvBnParams pool;
};

struct DecoderParams {
  ConvBnParams high;     // ASPP output -> 256 channels
  ConvBnParams low;      // low-level feature -> 48 channels
  ConvBnParams predict;  // fused -> 1 channel, with bias
  int out_height = 1;
  int out_width = 1;
};

AsppParams bind_aspp(const AsppPlan& plan, const WeightStore& store, float bn_eps);
DecoderParams bind_decoder(const DecoderPlan& plan, const WeightStore& store, float bn_eps);

Tensor aspp_forward(const Tensor& x, const AsppParams& p);

// Fuses both inputs, predicts logits, applies a sigmoid and resizes to the
// output size. Returns a 1 x H x W map with values in [0, 1].
Tensor decoder_forward(const Tensor& high, const Tensor& low, const DecoderParams& p);

// Encoder -> ASPP -> decoder. `image` is the normalized 3 x H x W input.
Tensor network_forward(const Tensor& image, const NetworkPlan& plan, const WeightStore& store);
Tensor network_forward(const Tensor& image, const NetworkConfig& cfg, const WeightStore& store);

// A config's plan and weights checked once, for repeated inference.
class Network {
 public:
  Network(NetworkConfig cfg, WeightStore store);

  const NetworkConfig& config() const { return cfg_; }
  const NetworkPlan& plan() const { return plan_; }
  const WeightStore& weights() const { return store_; }

  Tensor forward(const Tensor& image) const { return network_forward(image, plan_, store_); }

 private:
  NetworkConfig cfg_;
  NetworkPlan plan_;
  WeightStore store_;
};

}  // namespace dnl
