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

#include <filesystem>
#include <string>
#include <vector>

#include "dnl/nonlocal.hpp"

namespace dnl {

// One row of the inverted-residual table: expansion t, output channels c,
// repeats n, stride of the first block, and depthwise dilation.
struct IrModuleSpec {
  int expansion = 1;
  int channels = 16;
  int repeats = 1;
  int stride = 1;
  int dilation = 1;
};

struct DnlPlacement {
  // 1-based IR module indices after which a DNL module is inserted.
  std::vector<int> after_modules{3, 4};
  int split = 9;
  std::vector<SplitAxis> layers{SplitAxis::kVertical, SplitAxis::kHorizontal};
  // 0 selects the default of half the feature length (minimum 1).
  int key_dim = 0;
  int value_dim = 0;
};

struct EncoderConfig {
  int stem_channels = 32;
  std::vector<IrModuleSpec> modules;
  DnlPlacement dnl;
  // IR module whose output feeds the decoder's low-level branch.
  int low_level_module = 3;
};

struct AsppConfig {
  int channels = 256;
  std::vector<int> rates{6, 12, 18};
};

struct DecoderConfig {
  int high_channels = 256;
  int low_channels = 48;
};

struct NetworkConfig {
  int input_height = 360;
  int input_width = 360;
  float bn_eps = 1e-5f;
  EncoderConfig encoder;
  AsppConfig aspp;
  DecoderConfig decoder;

  // Seven-module MobileNetV2 table at output stride 8, DNL after IR-3 and
  // IR-4 with split 9.
  static NetworkConfig defaults();

  // The same network with every DNL module removed.
  NetworkConfig baseline() const;

  // Throws ConfigError for structurally invalid configs.
  void validate() const;
};

NetworkConfig parse_network_config(const std::string& yaml_text);
NetworkConfig load_network_config(const std::filesystem::path& path);
std::string dump_network_config(const NetworkConfig& cfg);

}  // namespace dnl
