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

#include "dnl/weights.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "dnl/errors.hpp"
#include "dnl/random.hpp"

namespace dnl {
namespace {

constexpr std::uint32_t kMaxPathLength = 4096;
constexpr std::uint32_t kMaxRank = 8;

std::string dims_string(const std::vector<std::uint32_t>& dims) {
  std::string s = "(";
  for (std::size_t n = 0; n < dims.size(); ++n) {
    if (n) s += ",";
    s += std::to_string(dims[n]);
  }
  return s + ")";
}

void add_conv_unit(const ConvUnit& u, std::vector<ParamSpec>& out) {
  const auto& g = u.geometry;
  const int fan_in = g.in_per_group() * g.kernel_h * g.kernel_w;
  out.push_back({u.name + ".weight",
                 {static_cast<std::uint32_t>(g.out_channels),
                  static_cast<std::uint32_t>(g.in_per_group()),
                  static_cast<std::uint32_t>(g.kernel_h), static_cast<std::uint32_t>(g.kernel_w)},
                 ParamRole::kWeight,
                 fan_in});
  const std::vector<std::uint32_t> per_channel{static_cast<std::uint32_t>(g.out_channels)};
  if (u.bias) out.push_back({u.name + ".bias", per_channel, ParamRole::kBias, fan_in});
  if (u.batchnorm) {
    out.push_back({u.name + ".bn.gamma", per_channel, ParamRole::kBnGamma, fan_in});
    out.push_back({u.name + ".bn.beta", per_channel, ParamRole::kBnBeta, fan_in});
    out.push_back({u.name + ".bn.mean", per_channel, ParamRole::kBnMean, fan_in});
    out.push_back({u.name + ".bn.var", per_channel, ParamRole::kBnVar, fan_in});
  }
}

void add_dnl_layer(const DnlLayerPlan& l, std::vector<ParamSpec>& out) {
  const auto c = static_cast<std::uint32_t>(l.shape.channels);
  const auto len = static_cast<std::uint32_t>(l.feature_len);
  const auto key = static_cast<std::uint32_t>(l.key_dim);
  const auto val = static_cast<std::uint32_t>(l.value_dim);
  out.push_back({l.name + ".theta.weight", {c, key, len}, ParamRole::kWeight, l.feature_len});
  out.push_back({l.name + ".theta.bias", {c, key}, ParamRole::kBias, l.feature_len});
  out.push_back({l.name + ".phi.weight", {c, key, len}, ParamRole::kWeight, l.feature_len});
  out.push_back({l.name + ".phi.bias", {c, key}, ParamRole::kBias, l.feature_len});
  out.push_back({l.name + ".g.weight", {c, len, val}, ParamRole::kWeight, l.feature_len});
  out.push_back({l.name + ".g.bias", {c, val}, ParamRole::kBias, l.feature_len});
  out.push_back({l.name + ".f.weight", {c, val, len}, ParamRole::kWeight, l.value_dim});
  out.push_back({l.name + ".f.bias", {c, len}, ParamRole::kBias, l.value_dim});
}

template <typename T>
void put(std::string& buf, T v) {
  static_assert(std::is_trivially_copyable_v<T> && sizeof(T) == 4);
  auto bits = std::bit_cast<std::uint32_t>(v);
  for (int b = 0; b < 4; ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("weights file truncated while reading ") + what);
    }
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    }
    pos_ += 4;
    return v;
  }
  std::string str(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t ParamTensor::count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

bool ParamTensor::operator==(const ParamTensor& other) const {
  return dims == other.dims && values.size() == other.values.size() &&
         std::memcmp(values.data(), other.values.data(), values.size() * sizeof(float)) == 0;
}

std::size_t ParamSpec::count() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void WeightStore::insert(std::string path, ParamTensor tensor) {
  if (tensor.values.size() != tensor.count()) {
    throw ConfigError("parameter " + path + " has " + std::to_string(tensor.values.size()) +
                      " values for dims " + dims_string(tensor.dims));
  }
  tensors_[std::move(path)] = std::move(tensor);
}

const ParamTensor& WeightStore::at(const std::string& path) const {
  auto it = tensors_.find(path);
  if (it == tensors_.end()) throw IncompleteModelError(path);
  return it->second;
}

ParamTensor& WeightStore::at(const std::string& path) {
  auto it = tensors_.find(path);
  if (it == tensors_.end()) throw IncompleteModelError(path);
  return it->second;
}

std::span<const float> WeightStore::values(const std::string& path,
                                           const std::vector<std::uint32_t>& dims) const {
  const auto& t = at(path);
  if (t.dims != dims) {
    throw ConfigError("parameter " + path + " has dims " + dims_string(t.dims) + ", expected " +
                      dims_string(dims));
  }
  return t.values;
}

std::size_t WeightStore::total_scalars() const {
  std::size_t n = 0;
  for (const auto& [path, t] : tensors_) n += t.values.size();
  return n;
}

std::vector<ParamSpec> parameter_manifest(const NetworkPlan& plan) {
  std::vector<ParamSpec> out;
  add_conv_unit(plan.encoder.stem, out);
  for (const auto& mod : plan.encoder.modules) {
    for (const auto& block : mod.blocks) {
      if (block.expand) add_conv_unit(*block.expand, out);
      add_conv_unit(block.depthwise, out);
      add_conv_unit(block.project, out);
    }
    for (const auto& layer : mod.dnl) add_dnl_layer(layer, out);
  }
  for (const auto& b : plan.aspp.branches) add_conv_unit(b, out);
  add_conv_unit(plan.aspp.pool, out);
  add_conv_unit(plan.decoder.high, out);
  add_conv_unit(plan.decoder.low, out);
  add_conv_unit(plan.decoder.predict, out);
  return out;
}

void check_complete(const WeightStore& store, const NetworkPlan& plan) {
  for (const auto& spec : parameter_manifest(plan)) store.values(spec.path, spec.dims);
}

WeightStore random_init(const NetworkConfig& cfg, std::uint64_t seed) {
  WeightStore store;
  for (const auto& spec : parameter_manifest(build_plan(cfg))) {
    ParamTensor t{spec.dims, std::vector<float>(spec.count())};
    switch (spec.role) {
      case ParamRole::kWeight:
      case ParamRole::kBias: {
        UniformRng rng(seed, spec.path);
        const float bound = 1.0f / std::sqrt(static_cast<float>(spec.fan_in));
        rng.fill(t.values, -bound, bound);
        break;
      }
      case ParamRole::kBnGamma:
      case ParamRole::kBnVar:
        std::fill(t.values.begin(), t.values.end(), 1.0f);
        break;
      case ParamRole::kBnBeta:
      case ParamRole::kBnMean:
        break;
    }
    store.insert(spec.path, std::move(t));
  }
  return store;
}

void write_weights(const WeightStore& store, std::ostream& out) {
  std::string buf(kWeightsMagic, 8);
  put(buf, static_cast<std::uint32_t>(store.size()));
  for (const auto& [path, t] : store.entries()) {
    put(buf, static_cast<std::uint32_t>(path.size()));
    buf += path;
    put(buf, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) put(buf, d);
    for (float v : t.values) put(buf, v);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing weights");
}

WeightStore read_weights(std::istream& in) {
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(bytes);
  if (r.str(8, "magic") != std::string(kWeightsMagic, 8)) {
    throw FormatError("weights file has bad magic or version");
  }
  const std::uint32_t entries = r.u32("entry count");
  WeightStore store;
  for (std::uint32_t e = 0; e < entries; ++e) {
    const std::uint32_t len = r.u32("path length");
    if (len == 0 || len > kMaxPathLength) throw FormatError("weights entry has bad path length");
    std::string path = r.str(len, "path");
    if (store.contains(path)) throw FormatError("duplicate weights entry " + path);
    const std::uint32_t rank = r.u32("rank");
    if (rank > kMaxRank) throw FormatError("weights entry " + path + " has rank " +
                                           std::to_string(rank));
    ParamTensor t;
    std::uint64_t count = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      t.dims.push_back(r.u32("dims"));
      count *= t.dims.back();
      if (count > r.remaining() / 4) {
        throw FormatError("weights file truncated in data of " + path);
      }
    }
    t.values.resize(count);
    for (auto& v : t.values) v = std::bit_cast<float>(r.u32("tensor data"));
    store.insert(std::move(path), std::move(t));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after weights entries");
  return store;
}

void save_weights(const WeightStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write weights " + path.string());
  write_weights(store, out);
}

WeightStore load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read weights " + path.string());
  return read_weights(in);
}

}  // namespace dnl
