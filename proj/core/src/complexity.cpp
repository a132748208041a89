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

#include "dnl/complexity.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "dnl/errors.hpp"
#include "dnl/head.hpp"

namespace dnl {
namespace {

using u64 = std::uint64_t;

void add_conv_unit(const ConvUnit& u, MaddsReport& r) {
  u64 madds = conv_madds(u.geometry, u.output);
  if (u.batchnorm) madds += batchnorm_madds(u.output);
  u64 params = conv_params(u.geometry, u.bias);
  if (u.batchnorm) params += 2ull * u.geometry.out_channels;
  r.entries.push_back({u.name, madds, params});
}

ComplexityInputs inputs_for(const DnlLayerPlan& l) {
  return ComplexityInputs{l.shape.channels, l.shape.height, l.shape.width, l.key_dim,
                          l.value_dim,      l.splits,       l.axis};
}

u64 dnl_layer_params_with_bias(const DnlLayerPlan& l) {
  const u64 c = l.shape.channels;
  return dnl_layer_space(inputs_for(l)).params +
         c * (2ull * l.key_dim + l.value_dim + l.feature_len);
}

}  // namespace

u64 MaddsReport::total_madds() const {
  u64 n = 0;
  for (const auto& e : entries) n += e.madds;
  return n;
}

u64 MaddsReport::total_params() const {
  u64 n = 0;
  for (const auto& e : entries) n += e.params;
  return n;
}

const MaddsEntry* MaddsReport::find(const std::string& layer) const {
  for (const auto& e : entries) {
    if (e.layer == layer) return &e;
  }
  return nullptr;
}

void ComplexityInputs::validate() const {
  if (channels < 1 || height < 1 || width < 1 || key_dim < 1 || value_dim < 1 || splits < 1) {
    throw ConfigError("complexity inputs must be positive");
  }
  const int extent = axis == SplitAxis::kVertical ? width : height;
  if (splits > extent) throw ConfigError("split count exceeds the divided extent");
}

u64 dnl_layer_madds(const ComplexityInputs& in) {
  in.validate();
  const bool vertical = in.axis == SplitAxis::kVertical;
  const u64 c = in.channels;
  const u64 h = in.height, w = in.width;
  const u64 extent = vertical ? w : h;
  const u64 s = in.splits;
  const u64 key = in.key_dim, val = in.value_dim;

  // Sum of squared sub-region sizes: the first (extent mod s) regions hold
  // one extra element.
  const u64 base = extent / s, extra = extent % s;
  const u64 sum_sq = extra * (base + 1) * (base + 1) + (s - extra) * base * base;

  const u64 quadratic = c * c * sum_sq * (key + val + 1);
  const u64 linear = 2 * c * h * w * (key + val);
  return quadratic + linear;
}

DnlSpace dnl_layer_space(const ComplexityInputs& in) {
  in.validate();
  const bool vertical = in.axis == SplitAxis::kVertical;
  const u64 c = in.channels;
  const u64 h = in.height, w = in.width;
  const u64 len = vertical ? h : w;
  const u64 extent = vertical ? w : h;
  const u64 s = in.splits;
  const u64 base = extent / s, extra = extent % s;
  const u64 sum_sq = extra * (base + 1) * (base + 1) + (s - extra) * base * base;

  DnlSpace out;
  out.params = 2 * c * len * (static_cast<u64>(in.key_dim) + in.value_dim);
  out.affinity = c * c * sum_sq;
  out.intermediates = out.affinity + 2 * c * extent * in.value_dim + c * h * w;
  return out;
}

u64 conv_madds(const ConvGeometry& g, const Shape& output) {
  return static_cast<u64>(output.size()) * g.in_per_group() * g.kernel_h * g.kernel_w;
}

u64 conv_params(const ConvGeometry& g, bool bias) {
  return g.weight_count() + (bias ? static_cast<u64>(g.out_channels) : 0);
}

u64 batchnorm_madds(const Shape& s) { return 2 * static_cast<u64>(s.size()); }

u64 softmax_madds(u64 rows, u64 cols) { return rows * cols; }

u64 sigmoid_madds(const Shape& s) { return s.size(); }

u64 global_avg_pool_madds(const Shape& input) { return input.size(); }

u64 bilinear_resize_madds(const Shape& output) { return 3 * static_cast<u64>(output.size()); }

MaddsReport network_madds(const NetworkPlan& plan) {
  MaddsReport r;
  add_conv_unit(plan.encoder.stem, r);
  for (const auto& mod : plan.encoder.modules) {
    for (const auto& block : mod.blocks) {
      if (block.expand) add_conv_unit(*block.expand, r);
      add_conv_unit(block.depthwise, r);
      add_conv_unit(block.project, r);
    }
    for (const auto& layer : mod.dnl) {
      r.entries.push_back(
          {layer.name, dnl_layer_madds(inputs_for(layer)), dnl_layer_params_with_bias(layer)});
    }
  }
  for (const auto& b : plan.aspp.branches) add_conv_unit(b, r);
  add_conv_unit(plan.aspp.pool, r);
  r.entries.back().madds += global_avg_pool_madds(plan.aspp.input);
  add_conv_unit(plan.decoder.high, r);
  add_conv_unit(plan.decoder.low, r);
  add_conv_unit(plan.decoder.predict, r);
  r.entries.push_back({plan.decoder.sigmoid_name, sigmoid_madds(plan.decoder.logits), 0});
  r.entries.push_back({plan.decoder.upsample_name, bilinear_resize_madds(plan.decoder.output), 0});
  return r;
}

MaddsReport network_madds(const NetworkConfig& cfg) { return network_madds(build_plan(cfg)); }

u64 count_params(const NetworkConfig& cfg) { return network_madds(cfg).total_params(); }

MaddsReport report_from_counter(const OpCounter& counter) {
  MaddsReport r;
  for (const auto& e : counter.entries()) {
    if (e.layer == "<unscoped>" && e.madds == 0 && e.params == 0) continue;
    r.entries.push_back({e.layer, e.madds, e.params});
  }
  return r;
}

MaddsReport instrument_trace(const NetworkConfig& cfg, const WeightStore& store,
                             const Tensor& image) {
  const NetworkPlan plan = build_plan(cfg);
  OpCounter counter;
  {
    CountingScope scope(counter);
    network_forward(image, plan, store);
  }
  return report_from_counter(counter);
}

std::vector<LayerMismatch> diff_reports(const MaddsReport& expected, const MaddsReport& actual) {
  std::vector<LayerMismatch> out;
  std::map<std::string, u64> seen;
  for (const auto& e : actual.entries) seen[e.layer] = e.madds;
  for (const auto& e : expected.entries) {
    auto it = seen.find(e.layer);
    const u64 got = it == seen.end() ? 0 : it->second;
    if (it == seen.end() || got != e.madds) out.push_back({e.layer, e.madds, got});
    if (it != seen.end()) seen.erase(it);
  }
  for (const auto& [layer, madds] : seen) out.push_back({layer, 0, madds});
  return out;
}

std::string format_report(const MaddsReport& report, const std::string& title) {
  std::ostringstream os;
  os << "== " << title << " ==\n";
  std::size_t width = 5;
  for (const auto& e : report.entries) width = std::max(width, e.layer.size());
  os << std::left << std::setw(static_cast<int>(width)) << "layer" << std::right
     << std::setw(16) << "madds" << std::setw(12) << "params" << "\n";
  for (const auto& e : report.entries) {
    os << std::left << std::setw(static_cast<int>(width)) << e.layer << std::right
       << std::setw(16) << e.madds << std::setw(12) << e.params << "\n";
  }
  os << "-- totals --\n";
  os << "madds=" << report.total_madds() << "\n";
  os << "params=" << report.total_params() << "\n";
  os << std::fixed << std::setprecision(3);
  os << "madds_billions=" << static_cast<double>(report.total_madds()) / 1e9 << "\n";
  os << "params_millions=" << static_cast<double>(report.total_params()) / 1e6 << "\n";
  return os.str();
}

std::string format_tsv(const MaddsReport& report) {
  std::ostringstream os;
  for (const auto& e : report.entries) os << e.layer << '\t' << e.madds << '\t' << e.params << '\n';
  return os.str();
}

}  // namespace dnl
