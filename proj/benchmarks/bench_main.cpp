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

#include <benchmark/benchmark.h>

#include "dnl/head.hpp"
#include "dnl/kernels.hpp"
#include "dnl/nonlocal.hpp"
#include "dnl/random.hpp"
#include "dnl/weights.hpp"

namespace {

using namespace dnl;

Tensor random_input(const Shape& s, std::uint64_t seed) {
  Tensor t(s);
  UniformRng rng(seed);
  rng.fill(t.values(), -1.0f, 1.0f);
  return t;
}

// One DNL layer on a 45x45 feature map; args: channels, splits.
void BM_DnlLayer(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  const int s = static_cast<int>(state.range(1));
  const Tensor x = random_input(Shape{c, 45, 45}, 1);
  const auto w = DnlLayerWeights::random(SplitAxis::kVertical, c, 45, 22, 22, 2);
  const DnlLayerParams p = w.view(s);
  for (auto _ : state) benchmark::DoNotOptimize(dnl_layer_forward(x, p));
}
BENCHMARK(BM_DnlLayer)
    ->ArgsProduct({{32, 64}, {1, 3, 5, 9}})
    ->Unit(benchmark::kMillisecond);

void BM_PointwiseConv(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  const Tensor x = random_input(Shape{c, 45, 45}, 3);
  const ConvGeometry g = ConvGeometry::dense(c, 6 * c, 1, 1, 1);
  Tensor wt = random_input(Shape{static_cast<int>(g.weight_count()), 1, 1}, 4);
  const ConvSpec spec{g, wt.values(), {}};
  for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, spec));
}
BENCHMARK(BM_PointwiseConv)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DepthwiseConv(benchmark::State& state) {
  const int dilation = static_cast<int>(state.range(0));
  const Tensor x = random_input(Shape{384, 45, 45}, 5);
  const ConvGeometry g = ConvGeometry::depthwise(384, 3, 1, dilation);
  Tensor wt = random_input(Shape{static_cast<int>(g.weight_count()), 1, 1}, 6);
  const ConvSpec spec{g, wt.values(), {}};
  for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, spec));
}
BENCHMARK(BM_DepthwiseConv)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// Full 360x360 forward pass; args: split, and 1 for IR-6 placement.
void BM_NetworkForward(benchmark::State& state) {
  NetworkConfig cfg = NetworkConfig::defaults();
  cfg.encoder.dnl.split = static_cast<int>(state.range(0));
  if (state.range(1) == 1) cfg.encoder.dnl.after_modules = {6};
  if (state.range(0) == 0) cfg = cfg.baseline();
  const Network net(cfg, random_init(cfg, 7));
  const Tensor x = random_input(Shape{3, 360, 360}, 8);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_NetworkForward)
    ->Args({0, 0})
    ->Args({9, 0})
    ->Args({1, 0})
    ->Args({1, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
