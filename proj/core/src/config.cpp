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

#include "dnl/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <string_view>
#include <set>
#include <sstream>

#include "dnl/errors.hpp"

namespace dnl {

NetworkConfig NetworkConfig::defaults() {
  NetworkConfig cfg;
  // Stride-2 rows 4 and 6 of the classification table run at stride 1 with
  // dilation 2 and 4 so every module after IR-3 stays at output stride 8.
  cfg.encoder.modules = {
      {1, 16, 1, 1, 1},  {6, 24, 2, 2, 1}, {6, 32, 3, 2, 1}, {6, 64, 4, 1, 2},
      {6, 96, 3, 1, 2},  {6, 160, 3, 1, 4}, {6, 320, 1, 1, 4},
  };
  return cfg;
}

NetworkConfig NetworkConfig::baseline() const {
  NetworkConfig cfg = *this;
  cfg.encoder.dnl.after_modules.clear();
  return cfg;
}

void NetworkConfig::validate() const {
  if (input_height < 1 || input_width < 1) throw ConfigError("input size must be positive");
  if (!(bn_eps >= 0.0f)) throw ConfigError("bn_eps must be >= 0");
  if (encoder.stem_channels < 1) throw ConfigError("stem_channels must be positive");
  if (encoder.modules.size() != 7) {
    throw ConfigError("encoder must have exactly 7 inverted residual modules, got " +
                      std::to_string(encoder.modules.size()));
  }
  int stride = 2;  // stem
  int stride_at_low = 0;
  for (std::size_t m = 0; m < encoder.modules.size(); ++m) {
    const auto& ir = encoder.modules[m];
    if (ir.expansion < 1 || ir.channels < 1 || ir.repeats < 1 || ir.stride < 1 ||
        ir.dilation < 1) {
      throw ConfigError("IR module " + std::to_string(m + 1) + " has non-positive fields");
    }
    stride *= ir.stride;
    if (static_cast<int>(m) + 1 == encoder.low_level_module) stride_at_low = stride;
  }
  if (encoder.low_level_module < 1 || encoder.low_level_module > 7) {
    throw ConfigError("low_level_module must be in [1, 7]");
  }
  if (stride_at_low != 8 || stride != 8) {
    throw ConfigError("encoder output stride must be 8 at the low-level module and the output");
  }
  if (input_height % 8 != 0 || input_width % 8 != 0) {
    throw ConfigError("input size " + std::to_string(input_height) + "x" +
                      std::to_string(input_width) + " must be divisible by 8");
  }
  std::set<int> seen;
  for (int m : encoder.dnl.after_modules) {
    if (m < 1 || m > 7) throw ConfigError("DNL placement " + std::to_string(m) + " not in [1, 7]");
    if (!seen.insert(m).second) throw ConfigError("duplicate DNL placement " + std::to_string(m));
  }
  if (!encoder.dnl.after_modules.empty() && encoder.dnl.layers.empty()) {
    throw ConfigError("DNL module needs at least one layer");
  }
  if (encoder.dnl.split < 1) throw ConfigError("DNL split must be >= 1");
  if (encoder.dnl.key_dim < 0 || encoder.dnl.value_dim < 0) {
    throw ConfigError("DNL embedding dims must be >= 0");
  }
  if (aspp.channels < 1 || aspp.rates.empty()) throw ConfigError("ASPP needs channels and rates");
  for (int r : aspp.rates) {
    if (r < 1) throw ConfigError("ASPP rates must be positive");
  }
  if (decoder.high_channels < 1 || decoder.low_channels < 1) {
    throw ConfigError("decoder channels must be positive");
  }
}

namespace {

template <typename T>
T get_or(const YAML::Node& node, const char* key, T fallback) {
  if (!node || !node[key]) return fallback;
  return node[key].as<T>();
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed,
                const std::string& section) {
  if (!node.IsMap()) throw ConfigError("config section '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) +
                        "'");
    }
  }
}

}  // namespace

NetworkConfig parse_network_config(const std::string& yaml_text) {
  NetworkConfig cfg = NetworkConfig::defaults();
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    if (!root || root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError("config root must be a mapping");
    check_keys(root, {"input", "bn_eps", "encoder", "dnl", "aspp", "decoder"}, "");

    if (const auto in = root["input"]) {
      check_keys(in, {"height", "width"}, "input");
      cfg.input_height = get_or(in, "height", cfg.input_height);
      cfg.input_width = get_or(in, "width", cfg.input_width);
    }
    cfg.bn_eps = get_or(root, "bn_eps", cfg.bn_eps);

    if (const auto enc = root["encoder"]) {
      check_keys(enc, {"stem_channels", "low_level_module", "modules"}, "encoder");
      cfg.encoder.stem_channels = get_or(enc, "stem_channels", cfg.encoder.stem_channels);
      cfg.encoder.low_level_module = get_or(enc, "low_level_module", cfg.encoder.low_level_module);
      if (const auto mods = enc["modules"]) {
        cfg.encoder.modules.clear();
        for (const auto& row : mods) {
          const auto v = row.as<std::vector<int>>();
          if (v.size() != 5) {
            throw ConfigError("encoder.modules rows are [t, c, n, stride, dilation]");
          }
          cfg.encoder.modules.push_back({v[0], v[1], v[2], v[3], v[4]});
        }
      }
    }
    if (const auto d = root["dnl"]) {
      check_keys(d, {"placements", "split", "layers", "key_dim", "value_dim"}, "dnl");
      auto& dnl = cfg.encoder.dnl;
      if (d["placements"]) dnl.after_modules = d["placements"].as<std::vector<int>>();
      dnl.split = get_or(d, "split", dnl.split);
      dnl.key_dim = get_or(d, "key_dim", dnl.key_dim);
      dnl.value_dim = get_or(d, "value_dim", dnl.value_dim);
      if (d["layers"]) {
        dnl.layers.clear();
        for (const auto& name : d["layers"].as<std::vector<std::string>>()) {
          dnl.layers.push_back(parse_split_axis(name));
        }
      }
    }
    if (const auto a = root["aspp"]) {
      check_keys(a, {"channels", "rates"}, "aspp");
      cfg.aspp.channels = get_or(a, "channels", cfg.aspp.channels);
      if (a["rates"]) cfg.aspp.rates = a["rates"].as<std::vector<int>>();
    }
    if (const auto dec = root["decoder"]) {
      check_keys(dec, {"high_channels", "low_channels"}, "decoder");
      cfg.decoder.high_channels = get_or(dec, "high_channels", cfg.decoder.high_channels);
      cfg.decoder.low_channels = get_or(dec, "low_channels", cfg.decoder.low_channels);
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

NetworkConfig load_network_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network_config(ss.str());
}

std::string dump_network_config(const NetworkConfig& cfg) {
  YAML::Emitter out;
  out.SetFloatPrecision(9);
  out << YAML::BeginMap;
  out << YAML::Key << "input" << YAML::Value << YAML::BeginMap << YAML::Key << "height"
      << YAML::Value << cfg.input_height << YAML::Key << "width" << YAML::Value << cfg.input_width
      << YAML::EndMap;
  out << YAML::Key << "bn_eps" << YAML::Value << cfg.bn_eps;
  out << YAML::Key << "encoder" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "stem_channels" << YAML::Value << cfg.encoder.stem_channels;
  out << YAML::Key << "low_level_module" << YAML::Value << cfg.encoder.low_level_module;
  out << YAML::Key << "modules" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : cfg.encoder.modules) {
    out << YAML::Flow << std::vector<int>{m.expansion, m.channels, m.repeats, m.stride, m.dilation};
  }
  out << YAML::EndSeq << YAML::EndMap;
  out << YAML::Key << "dnl" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "placements" << YAML::Value << YAML::Flow << cfg.encoder.dnl.after_modules;
  out << YAML::Key << "split" << YAML::Value << cfg.encoder.dnl.split;
  std::vector<std::string> layers;
  for (auto a : cfg.encoder.dnl.layers) layers.emplace_back(to_string(a));
  out << YAML::Key << "layers" << YAML::Value << YAML::Flow << layers;
  out << YAML::Key << "key_dim" << YAML::Value << cfg.encoder.dnl.key_dim;
  out << YAML::Key << "value_dim" << YAML::Value << cfg.encoder.dnl.value_dim;
  out << YAML::EndMap;
  out << YAML::Key << "aspp" << YAML::Value << YAML::BeginMap << YAML::Key << "channels"
      << YAML::Value << cfg.aspp.channels << YAML::Key << "rates" << YAML::Value << YAML::Flow
      << cfg.aspp.rates << YAML::EndMap;
  out << YAML::Key << "decoder" << YAML::Value << YAML::BeginMap << YAML::Key << "high_channels"
      << YAML::Value << cfg.decoder.high_channels << YAML::Key << "low_channels" << YAML::Value
      << cfg.decoder.low_channels << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace dnl
