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

// Acceptance runner: one [PASS]/[FAIL] line per criterion, nonzero exit if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dnl/backbone.hpp"
#include "dnl/complexity.hpp"
#include "dnl/errors.hpp"
#include "dnl/head.hpp"
#include "dnl/metrics.hpp"
#include "dnl/nonlocal.hpp"
#include "dnl/random.hpp"
#include "dnl/weights.hpp"
#include "dnl_tools/commands.hpp"

namespace {

using namespace dnl;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using u64 = std::uint64_t;

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  Verdict verdict(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    std::ostringstream os;
    os << failures_ << " failure(s): " << notes_.str();
    return {false, os.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream notes_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Tensor random_tensor(const Shape& s, UniformRng& rng) {
  Tensor t(s);
  rng.fill(t.values(), -1.0f, 1.0f);
  return t;
}

float max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return INFINITY;
  float m = 0.0f;
  for (std::size_t n = 0; n < a.size(); ++n) {
    m = std::max(m, std::abs(a.values()[n] - b.values()[n]));
  }
  return m;
}

DnlLayerWeights random_weights(UniformRng& rng, SplitAxis axis, int c, int h, int w,
                               std::uint64_t seed) {
  const int len = axis == SplitAxis::kVertical ? h : w;
  return DnlLayerWeights::random(axis, c, len, rng.uniform_int(1, len), rng.uniform_int(1, len),
                                 seed);
}

WeightStore with_zero_projections(WeightStore store) {
  for (const auto& [path, tensor] : store.entries()) {
    if (path.find(".dnl") != std::string::npos &&
        (path.ends_with(".f.weight") || path.ends_with(".f.bias"))) {
      auto& t = store.at(path);
      std::fill(t.values.begin(), t.values.end(), 0.0f);
    }
  }
  return store;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Verdict ac1_oracle_equivalence() {
  Checker check;
  UniformRng rng(101);
  const auto t0 = Clock::now();
  float worst = 0.0f;
  int cases = 0;
  for (SplitAxis axis : {SplitAxis::kVertical, SplitAxis::kHorizontal}) {
    for (int s = 1; s <= 3; ++s) {
      for (int trial = 0; trial < 100; ++trial) {
        const int c = rng.uniform_int(1, 8);
        const int h = rng.uniform_int(3, 12), w = rng.uniform_int(3, 12);
        const Tensor x = random_tensor(Shape{c, h, w}, rng);
        const auto wts = random_weights(rng, axis, c, h, w, 10000 + cases);
        const float d =
            max_abs_diff(dnl_layer_forward(x, wts.view(s)), dnl_reference_naive(x, wts.view(s)));
        worst = std::max(worst, d);
        check.expect(d <= 1e-5f, std::string(to_string(axis)) + " s=" + std::to_string(s) +
                                     " diff " + fmt(d));
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  check.expect(secs < 30.0, "runtime " + fmt(secs) + " s");
  return check.verdict(std::to_string(cases) + " cases, max diff " + fmt(worst) + ", " +
                       fmt(secs) + " s");
}

Verdict ac2_residual_identity() {
  Checker check;
  UniformRng rng(202);
  for (SplitAxis axis : {SplitAxis::kVertical, SplitAxis::kHorizontal}) {
    for (int s : {1, 2, 3}) {
      const Tensor x = random_tensor(Shape{4, 9, 10}, rng);
      auto wts = random_weights(rng, axis, 4, 9, 10, 300 + s);
      wts.zero_output_projection();
      check.expect(dnl_layer_forward(x, wts.view(s)).identical(x), "layer level");
    }
  }
  NetworkConfig cfg = NetworkConfig::defaults();
  cfg.input_height = 72;
  cfg.input_width = 88;
  const WeightStore store = with_zero_projections(random_init(cfg, 7));
  const Tensor image = random_tensor(Shape{3, 72, 88}, rng);
  const EncoderOutput with = encoder_forward(image, cfg, store);
  const EncoderOutput without = encoder_forward(image, cfg.baseline(), store);
  check.expect(with.low_level.identical(without.low_level) &&
                   with.high_level.identical(without.high_level),
               "encoder level");
  check.expect(network_forward(image, cfg, store)
                   .identical(network_forward(image, cfg.baseline(), store)),
               "network level");
  return check.verdict("layer, encoder and network outputs bitwise equal");
}

Verdict ac3_split_law() {
  Checker check;
  UniformRng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const SplitAxis axis = trial % 2 ? SplitAxis::kHorizontal : SplitAxis::kVertical;
    const int s = rng.uniform_int(2, 4);
    const int extent = s * rng.uniform_int(1, 3);
    const int other = rng.uniform_int(2, 8);
    const int h = axis == SplitAxis::kVertical ? other : extent;
    const int w = axis == SplitAxis::kVertical ? extent : other;
    const int c = rng.uniform_int(1, 6);
    const Tensor x = random_tensor(Shape{c, h, w}, rng);
    const auto wts = random_weights(rng, axis, c, h, w, 400 + trial);
    std::vector<Tensor> parts;
    for (const Tensor& region : split_subregions(x, axis, s)) {
      parts.push_back(dnl_layer_forward(region, wts.view(1)));
    }
    check.expect(merge_subregions(parts, axis).identical(dnl_layer_forward(x, wts.view(s))),
                 "trial " + std::to_string(trial));
  }
  return check.verdict("20 cases bitwise equal");
}

Verdict ac4_transpose_symmetry() {
  Checker check;
  UniformRng rng(404);
  float worst = 0.0f;
  for (int trial = 0; trial < 20; ++trial) {
    const int c = rng.uniform_int(1, 6), h = rng.uniform_int(2, 10), w = rng.uniform_int(2, 10);
    const int s = rng.uniform_int(1, std::min(3, w));
    const Tensor x = random_tensor(Shape{c, h, w}, rng);
    const auto vw = random_weights(rng, SplitAxis::kVertical, c, h, w, 500 + trial);
    DnlLayerWeights hw = vw;
    hw.axis = SplitAxis::kHorizontal;
    const Tensor vertical = dnl_layer_forward(x, vw.view(s));
    const Tensor horizontal = dnl_layer_forward(transpose_spatial(x), hw.view(s));
    const float d = max_abs_diff(horizontal, transpose_spatial(vertical));
    worst = std::max(worst, d);
    check.expect(d <= 1e-6f, "trial " + std::to_string(trial) + " diff " + fmt(d));
  }
  return check.verdict("20 cases, max diff " + fmt(worst));
}

Verdict ac5_complexity_consistency() {
  Checker check;
  UniformRng rng(505);
  const int splits[] = {1, 2, 3, 5, 9};
  std::size_t layers = 0;
  for (int trial = 0; trial < 20; ++trial) {
    NetworkConfig cfg = NetworkConfig::defaults();
    cfg.input_height = 8 * rng.uniform_int(9, 12);
    cfg.input_width = 8 * rng.uniform_int(9, 12);
    auto& dnl = cfg.encoder.dnl;
    dnl.split = splits[trial % 5];
    const int first = rng.uniform_int(3, 7);
    dnl.after_modules = {first};
    if (trial % 3 == 0 && first < 7) dnl.after_modules.push_back(first + 1);
    dnl.key_dim = trial % 2 ? 0 : rng.uniform_int(1, 9);
    dnl.value_dim = trial % 4 == 1 ? 0 : rng.uniform_int(1, 9);
    if (trial % 5 == 4) dnl.layers = {SplitAxis::kHorizontal};

    const WeightStore store = random_init(cfg, 600 + trial);
    const Tensor image = random_tensor(Shape{3, cfg.input_height, cfg.input_width}, rng);
    const MaddsReport closed = network_madds(cfg);
    const MaddsReport traced = instrument_trace(cfg, store, image);
    for (const auto& d : diff_reports(closed, traced)) {
      check.expect(false, "config " + std::to_string(trial) + " " + d.layer + " " +
                              std::to_string(d.expected) + " vs " + std::to_string(d.actual));
    }
    check.expect(closed.total_madds() == traced.total_madds(),
                 "config " + std::to_string(trial) + " totals");
    layers += closed.entries.size();
  }
  return check.verdict("20 configs, " + std::to_string(layers) + " layer entries equal");
}

Verdict ac6_paper_targets() {
  Checker check;
  const auto t0 = Clock::now();
  const NetworkConfig cfg = NetworkConfig::defaults();
  auto with_split = [&](int s) {
    NetworkConfig c = cfg;
    c.encoder.dnl.split = s;
    return network_madds(c).total_madds();
  };
  const double params = static_cast<double>(count_params(cfg));
  const double split9 = static_cast<double>(network_madds(cfg).total_madds());
  const double base = static_cast<double>(network_madds(cfg.baseline()).total_madds());
  check.expect(std::abs(params - 5.320e6) <= 0.10 * 5.320e6, "params " + fmt(params));
  check.expect(std::abs(split9 - 9.567e9) <= 0.15 * 9.567e9, "split-9 MAdds " + fmt(split9));
  check.expect(std::abs(base - 9.325e9) <= 0.15 * 9.325e9, "baseline MAdds " + fmt(base));
  const u64 s1 = with_split(1), s3 = with_split(3), s9 = with_split(9);
  check.expect(s9 < s3 && s3 < s1, "split ordering");
  const double secs = seconds_since(t0);
  check.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  return check.verdict("params " + fmt(params) + ", split-9 " + fmt(split9) + ", baseline " +
                       fmt(base) + ", " + fmt(secs) + " s");
}

Verdict ac7_directional_timing() {
  Checker check;
  constexpr int kImages = 50;
  UniformRng rng(707);
  std::vector<Tensor> images;
  for (int n = 0; n < kImages; ++n) images.push_back(random_tensor(Shape{3, 360, 360}, rng));

  auto time_config = [&](int split, std::vector<int> placements) {
    NetworkConfig cfg = NetworkConfig::defaults();
    cfg.encoder.dnl.split = split;
    cfg.encoder.dnl.after_modules = std::move(placements);
    const Network net(cfg, random_init(cfg, 1));
    return tools::run_benchmark(net, images, kImages, 2).total();
  };
  const double split9 = time_config(9, {3, 4});
  const double split1 = time_config(1, {3, 4});
  const double ir6 = time_config(1, {6});
  check.expect(split9 < split1, "split-9 " + fmt(split9) + " s not below split-1 " +
                                    fmt(split1) + " s");
  check.expect(split1 < ir6, "default placement " + fmt(split1) + " s not below IR-6 " +
                                 fmt(ir6) + " s");
  return check.verdict("50 images: split-9 " + fmt(split9) + " s < split-1 " + fmt(split1) +
                       " s < IR-6 split-1 " + fmt(ir6) + " s");
}

Verdict ac8_metrics_oracles() {
  Checker check;
  UniformRng rng(808);
  std::vector<SaliencyEval> data;
  for (int n = 0; n < 50; ++n) {
    SaliencyEval e{8, 8, std::vector<float>(64), std::vector<float>(64)};
    for (auto& v : e.prediction) v = rng.uniform(0.0f, 1.0f);
    for (auto& g : e.ground_truth) g = rng.uniform(0.0f, 1.0f) < 0.4f ? 1.0f : 0.0f;
    if (n == 3) std::fill(e.ground_truth.begin(), e.ground_truth.end(), 0.0f);
    if (n == 7) std::fill(e.prediction.begin(), e.prediction.end(), 0.25f);
    data.push_back(std::move(e));
  }
  const MetricsConfig mcfg;

  // Exhaustive per-threshold counting.
  double oracle_max = 0.0;
  std::vector<double> oracle_f;
  for (double t : mcfg.thresholds) {
    double ps = 0.0, rs = 0.0;
    for (const auto& e : data) {
      const auto [lo_it, hi_it] = std::minmax_element(e.prediction.begin(), e.prediction.end());
      const double lo = *lo_it, hi = *hi_it;
      long tp = 0, predicted = 0, positive = 0;
      for (std::size_t n = 0; n < e.prediction.size(); ++n) {
        double v = e.prediction[n];
        v = hi > lo ? (v - lo) / (hi - lo) : std::clamp(v, 0.0, 1.0);
        const bool on = v > t, fg = e.ground_truth[n] == 1.0f;
        predicted += on;
        positive += fg;
        tp += on && fg;
      }
      ps += predicted == 0 ? 1.0 : static_cast<double>(tp) / predicted;
      rs += positive == 0 ? 0.0 : static_cast<double>(tp) / positive;
    }
    const double p = ps / data.size(), r = rs / data.size();
    const double f = mcfg.beta2 * p + r > 0 ? (1 + mcfg.beta2) * p * r / (mcfg.beta2 * p + r) : 0;
    oracle_f.push_back(f);
    oracle_max = std::max(oracle_max, f);
  }
  const auto curve = pr_curve(data, mcfg);
  check.expect(curve.size() == oracle_f.size(), "curve length");
  for (std::size_t n = 0; n < std::min(curve.size(), oracle_f.size()); ++n) {
    check.expect(std::abs(curve[n].f_beta - oracle_f[n]) <= 1e-9, "F at threshold " +
                                                                      std::to_string(n));
  }
  check.expect(std::abs(max_f_measure(data, mcfg) - oracle_max) <= 1e-9, "maxF");

  for (double p : {0.0, 0.1, 0.37, 0.5, 1.0}) {
    check.expect(std::abs(f_beta(p, p) - p) <= 1e-12, "f_beta(p,p) at " + fmt(p));
  }
  for (const auto& e : data) {
    const double m = mae(e);
    check.expect(m >= 0.0 && m <= 1.0, "MAE bounds");
    SaliencyEval flipped_gt = e;
    for (auto& g : flipped_gt.ground_truth) g = 1.0f - g;
    check.expect(std::abs(m + mae(flipped_gt) - 1.0) <= 1e-9, "MAE complement sum");
    SaliencyEval both = flipped_gt;
    for (auto& v : both.prediction) v = 1.0f - v;
    check.expect(std::abs(mae(both) - m) <= 1e-6, "MAE under joint complement");
  }
  return check.verdict("50 pairs, maxF " + fmt(oracle_max) + " matches oracle");
}

Verdict ac9_end_to_end() {
  Checker check;
  const NetworkConfig cfg = NetworkConfig::defaults();
  const WeightStore store = random_init(cfg, 2024);
  UniformRng rng(909);
  const Tensor image = random_tensor(Shape{3, 360, 360}, rng);
  const Network net(cfg, store);
  const Tensor a = net.forward(image);
  const Tensor b = net.forward(image);
  check.expect(a.shape() == (Shape{1, 360, 360}), "map shape");
  check.expect(std::all_of(a.values().begin(), a.values().end(),
                           [](float v) { return v >= 0.0f && v <= 1.0f; }),
               "map range");
  check.expect(a.identical(b), "determinism");
  const EncoderOutput enc = encoder_forward(image, cfg, store);
  check.expect(enc.low_level.shape() == (Shape{32, 45, 45}), "low-level shape");
  check.expect(enc.high_level.shape() == (Shape{320, 45, 45}), "high-level shape");
  return check.verdict("1x360x360 map in [0,1], low 32x45x45, high 320x45x45, deterministic");
}

Verdict ac10_weights_roundtrip() {
  Checker check;
  UniformRng rng(1010);
  const fs::path dir = fs::temp_directory_path() / "dnl_acceptance_weights";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (int n = 0; n < 10; ++n) {
    WeightStore store;
    const int entries = rng.uniform_int(1, 10);
    for (int e = 0; e < entries; ++e) {
      ParamTensor t;
      std::size_t count = 1;
      for (int r = rng.uniform_int(1, 4); r > 0; --r) {
        t.dims.push_back(static_cast<std::uint32_t>(rng.uniform_int(1, 6)));
        count *= t.dims.back();
      }
      t.values.resize(count);
      rng.fill(t.values, -100.0f, 100.0f);
      store.insert("unit" + std::to_string(e) + ".weight", std::move(t));
    }
    const fs::path p = dir / ("w" + std::to_string(n) + ".bin");
    save_weights(store, p);
    check.expect(load_weights(p) == store, "store " + std::to_string(n));
  }
  const NetworkConfig cfg = NetworkConfig::defaults();
  save_weights(random_init(cfg, 3), dir / "net.bin");
  check.expect(load_weights(dir / "net.bin") == random_init(cfg, 3), "network store");

  std::ifstream in(dir / "net.bin", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), {});
  auto expect_format_error = [&](const std::string& content, const std::string& what) {
    const fs::path p = dir / "bad.bin";
    std::ofstream(p, std::ios::binary | std::ios::trunc) << content;
    try {
      load_weights(p);
      check.expect(false, what + " accepted");
    } catch (const FormatError&) {
    } catch (const std::exception& e) {
      check.expect(false, what + " wrong error: " + e.what());
    }
  };
  expect_format_error("", "empty file");
  expect_format_error("NOTMAGIC", "bad magic");
  expect_format_error(bytes.substr(0, bytes.size() / 2), "truncated file");
  expect_format_error(bytes + "extra", "trailing bytes");
  try {
    load_weights(dir / "missing.bin");
    check.expect(false, "missing file accepted");
  } catch (const FormatError&) {
    check.expect(false, "missing file reported as format error");
  } catch (const IoError&) {
  }
  WeightStore partial = random_init(cfg, 3);
  partial.erase("aspp.pool.weight");
  try {
    Network(cfg, partial);
    check.expect(false, "incomplete store accepted");
  } catch (const IncompleteModelError& e) {
    check.expect(e.path() == "aspp.pool.weight", "incomplete path " + e.path());
  }
  fs::remove_all(dir);
  return check.verdict("10 stores lossless, malformed files rejected");
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "DNL oracle equivalence", ac1_oracle_equivalence},
      {"AC2", "residual identity", ac2_residual_identity},
      {"AC3", "block-diagonal split law", ac3_split_law},
      {"AC4", "transpose symmetry", ac4_transpose_symmetry},
      {"AC5", "complexity consistency", ac5_complexity_consistency},
      {"AC6", "efficiency targets", ac6_paper_targets},
      {"AC7", "directional timing", ac7_directional_timing},
      {"AC8", "metrics oracles", ac8_metrics_oracles},
      {"AC9", "end-to-end contract", ac9_end_to_end},
      {"AC10", "weights roundtrip", ac10_weights_roundtrip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << v.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
