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

#include <optional>
#include <string>
#include <vector>

#include "dnl/config.hpp"
#include "dnl/kernels.hpp"
#include "dnl/nonlocal.hpp"

namespace dnl {

// A convolution with its optional batch norm and ReLU6. `name` doubles as the
// instrumentation scope and the weight-path prefix.
struct ConvUnit {
  std::string name;
  ConvGeometry geometry;
  Shape input;
  Shape output;
  bool bias = false;
  bool batchnorm = true;
  bool relu6 = true;
};

struct IrBlockPlan {
  std::string name;
  std::optional<ConvUnit> expand;  // absent when expansion == 1
  ConvUnit depthwise;
  ConvUnit project;
  bool skip = false;
};

struct DnlLayerPlan {
  std::string name;
  SplitAxis axis = SplitAxis::kVertical;
  Shape shape;
  int feature_len = 1;
  int key_dim = 1;
  int value_dim = 1;
  int splits = 1;
};

struct IrModulePlan {
  int index = 0;  // 1-based
  std::vector<IrBlockPlan> blocks;
  std::vector<DnlLayerPlan> dnl;  // applied after the last block
  Shape output;
};

struct EncoderPlan {
  ConvUnit stem;
  std::vector<IrModulePlan> modules;
  int low_level_module = 3;
};

struct AsppPlan {
  Shape input;
  std::vector<ConvUnit> branches;  // 1x1 followed by the atrous convs
  ConvUnit pool;                   // runs on the 1x1 pooled map
  Shape output;
};

struct DecoderPlan {
  ConvUnit high;
  ConvUnit low;
  ConvUnit predict;  // 1x1 to one channel with bias, no BN, no ReLU6
  std::string sigmoid_name;
  std::string upsample_name;
  Shape logits;      // 1 x h x w
  Shape output;      // 1 x H x W
};

struct NetworkPlan {
  Shape input;
  float bn_eps = 1e-5f;
  EncoderPlan encoder;
  AsppPlan aspp;
  DecoderPlan decoder;
};

// Propagates shapes through `cfg` and names every layer. Throws ConfigError on
// invalid configs, including split counts larger than the divided extent.
NetworkPlan build_plan(const NetworkConfig& cfg);

}  // namespace dnl
