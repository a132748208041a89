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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dnl/config.hpp"
#include "dnl/plan.hpp"

namespace dnl {

// A parameter of arbitrary rank (conv kernels are rank 4).
struct ParamTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t count() const;
  bool operator==(const ParamTensor& other) const;  // bitwise on values
};

enum class ParamRole { kWeight, kBias, kBnGamma, kBnBeta, kBnMean, kBnVar };

struct ParamSpec {
  std::string path;
  std::vector<std::uint32_t> dims;
  ParamRole role = ParamRole::kWeight;
  int fan_in = 1;

  // BN running statistics are stored but not learned.
  bool learnable() const { return role != ParamRole::kBnMean && role != ParamRole::kBnVar; }
  std::size_t count() const;
};

// Parameter path -> tensor, iterated in path order.
class WeightStore {
 public:
  void insert(std::string path, ParamTensor tensor);
  bool contains(const std::string& path) const { return tensors_.count(path) != 0; }
  // Throws IncompleteModelError when absent.
  const ParamTensor& at(const std::string& path) const;
  ParamTensor& at(const std::string& path);
  bool erase(const std::string& path) { return tensors_.erase(path) != 0; }

  // Values of `path`, checked against the expected dims (ConfigError on
  // mismatch, IncompleteModelError when absent).
  std::span<const float> values(const std::string& path,
                                const std::vector<std::uint32_t>& dims) const;

  const std::map<std::string, ParamTensor>& entries() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }
  std::size_t total_scalars() const;

  bool operator==(const WeightStore& other) const { return tensors_ == other.tensors_; }

 private:
  std::map<std::string, ParamTensor> tensors_;
};

// Every parameter `plan` reads, in forward order.
std::vector<ParamSpec> parameter_manifest(const NetworkPlan& plan);

// Throws IncompleteModelError naming the first missing path, or ConfigError on
// a shape mismatch.
void check_complete(const WeightStore& store, const NetworkPlan& plan);

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; BN mean 0, var 1,
// gamma 1, beta 0. Each tensor draws from its own stream keyed by (seed,
// path), so layers shared between two configs get identical values.
WeightStore random_init(const NetworkConfig& cfg, std::uint64_t seed);

// Little-endian container: 8-byte magic "DNLW0001", u32 entry count, then per
// entry u32 path length, path bytes, u32 rank, rank x u32 dims, float32 data.
void write_weights(const WeightStore& store, std::ostream& out);
WeightStore read_weights(std::istream& in);
void save_weights(const WeightStore& store, const std::filesystem::path& path);
WeightStore load_weights(const std::filesystem::path& path);

inline constexpr char kWeightsMagic[9] = "DNLW0001";

}  // namespace dnl
