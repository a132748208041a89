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

#include <gtest/gtest.h>

#include <sstream>

#include "dnl/complexity.hpp"
#include "dnl/errors.hpp"
#include "dnl/head.hpp"
#include "test_util.hpp"

namespace dnl {
namespace {

using testing::random_tensor;
using testing::random_vector;
using u64 = std::uint64_t;

template <typename F>
u64 counted(F&& fn) {
  OpCounter counter;
  {
    CountingScope scope(counter);
    fn();
  }
  return counter.total_madds();
}

ComplexityInputs small_inputs(int splits) {
  return ComplexityInputs{2, 4, 4, 2, 2, splits, SplitAxis::kVertical};
}

TEST(DnlMadds, WorkedExamples) {
  EXPECT_EQ(dnl_layer_madds(small_inputs(1)), 4u * 16 * 5 + 2u * 2 * 4 * 4 * 4);
  EXPECT_EQ(dnl_layer_madds(small_inputs(1)), 576u);
  EXPECT_EQ(dnl_layer_madds(small_inputs(2)), 416u);
}

TEST(DnlMadds, WorkedExamplesInstrumented) {
  UniformRng rng(1);
  const Tensor x = random_tensor(Shape{2, 4, 4}, rng);
  const auto w = DnlLayerWeights::random(SplitAxis::kVertical, 2, 4, 2, 2, 2);
  EXPECT_EQ(counted([&] { dnl_layer_forward(x, w.view(1)); }), 576u);
  EXPECT_EQ(counted([&] { dnl_layer_forward(x, w.view(2)); }), 416u);
}

TEST(DnlMadds, MonotoneInSplits) {
  for (SplitAxis axis : {SplitAxis::kVertical, SplitAxis::kHorizontal}) {
    ComplexityInputs in{8, 12, 18, 6, 9, 1, axis};
    const u64 vanilla = dnl_layer_madds(in);
    const int extent = axis == SplitAxis::kVertical ? in.width : in.height;
    u64 previous = vanilla;
    for (int s = 1; s <= extent; ++s) {
      in.splits = s;
      const u64 m = dnl_layer_madds(in);
      EXPECT_GE(vanilla, m);
      EXPECT_LE(m, previous);
      previous = m;
    }
  }
}

TEST(DnlMadds, QuadraticTermScalesAsOneOverS) {
  for (int s : {1, 3, 5, 9, 15}) {
    ComplexityInputs in{32, 45, 45, 22, 22, s, SplitAxis::kVertical};
    const u64 linear = 2ull * in.channels * in.height * in.width * (in.key_dim + in.value_dim);
    in.splits = 1;
    const u64 quad1 = dnl_layer_madds(in) - linear;
    in.splits = s;
    const u64 quad_s = dnl_layer_madds(in) - linear;
    EXPECT_EQ(quad_s * s, quad1) << "s=" << s;
  }
}

TEST(DnlMadds, RejectsInvalidInputs) {
  EXPECT_THROW(dnl_layer_madds(ComplexityInputs{0, 4, 4, 2, 2, 1, SplitAxis::kVertical}),
               ConfigError);
  EXPECT_THROW(dnl_layer_madds(ComplexityInputs{2, 4, 4, 2, 2, 5, SplitAxis::kVertical}),
               ConfigError);
}

TEST(DnlSpace, WorkedExamples) {
  const DnlSpace v = dnl_layer_space(small_inputs(1));
  ComplexityInputs h = small_inputs(1);
  h.axis = SplitAxis::kHorizontal;
  EXPECT_EQ(v.params + dnl_layer_space(h).params, 128u);
  EXPECT_EQ(v.affinity, 64u);
  EXPECT_EQ(dnl_layer_space(small_inputs(2)).affinity, 32u);
  // Weight tensors of the owning type sum to the same count.
  const DnlLayerWeights wv(SplitAxis::kVertical, 2, 4, 2, 2);
  const DnlLayerWeights wh(SplitAxis::kHorizontal, 2, 4, 2, 2);
  EXPECT_EQ(wv.theta_weight.size() + wv.phi_weight.size() + wv.g_weight.size() +
                wv.f_weight.size() + wh.theta_weight.size() + wh.phi_weight.size() +
                wh.g_weight.size() + wh.f_weight.size(),
            128u);
}

TEST(DnlMadds, InstrumentedMatchesClosedFormOnRandomConfigs) {
  UniformRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const SplitAxis axis = trial % 2 ? SplitAxis::kHorizontal : SplitAxis::kVertical;
    const int c = rng.uniform_int(1, 6), h = rng.uniform_int(2, 10), w = rng.uniform_int(2, 10);
    const int len = axis == SplitAxis::kVertical ? h : w;
    const int extent = axis == SplitAxis::kVertical ? w : h;
    const int key = rng.uniform_int(1, len), value = rng.uniform_int(1, len);
    const int s = rng.uniform_int(1, extent);
    const Tensor x = random_tensor(Shape{c, h, w}, rng);
    const auto wts = DnlLayerWeights::random(axis, c, len, key, value, 40 + trial);
    EXPECT_EQ(counted([&] { dnl_layer_forward(x, wts.view(s)); }),
              dnl_layer_madds(ComplexityInputs{c, h, w, key, value, s, axis}))
        << "trial " << trial;
  }
}

TEST(OpMadds, ConvMatchesDefinition) {
  const ConvGeometry g = ConvGeometry::pointwise(4, 8);
  EXPECT_EQ(conv_madds(g, Shape{8, 5, 5}), 800u);
  const ConvGeometry k3 = ConvGeometry::dense(6, 10, 3, 1, 1);
  EXPECT_EQ(conv_params(k3, false), 6u * 10 * 9);
  EXPECT_EQ(conv_params(k3, true), 6u * 10 * 9 + 10);
}

TEST(OpMadds, KernelsMatchClosedForms) {
  UniformRng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = trial % 2 ? 3 : 1;
    const int stride = rng.uniform_int(1, 2), dilation = rng.uniform_int(1, 3);
    const int cin = rng.uniform_int(1, 6), cout = rng.uniform_int(1, 6);
    const ConvGeometry g = trial % 3 == 0 ? ConvGeometry::depthwise(cin, k, stride, dilation)
                                          : ConvGeometry::dense(cin, cout, k, stride, dilation);
    const Tensor x = random_tensor(Shape{cin, rng.uniform_int(3, 9), rng.uniform_int(3, 9)}, rng);
    const auto w = random_vector(g.weight_count(), rng);
    Tensor y;
    const u64 got = counted([&] { y = conv2d(x, ConvSpec{g, w, {}}); });
    EXPECT_EQ(got, conv_madds(g, y.shape())) << "trial " << trial;

    const std::vector<float> ones(y.channels(), 1.0f), zeros(y.channels(), 0.0f);
    EXPECT_EQ(counted([&] { batchnorm_infer(y, BatchNormSpec{zeros, ones, ones, zeros}); }),
              batchnorm_madds(y.shape()));
    EXPECT_EQ(counted([&] { sigmoid(y); }), sigmoid_madds(y.shape()));
    EXPECT_EQ(counted([&] { global_avg_pool(y); }), global_avg_pool_madds(y.shape()));
    const int oh = rng.uniform_int(1, 20), ow = rng.uniform_int(1, 20);
    EXPECT_EQ(counted([&] { bilinear_resize(y, oh, ow); }),
              bilinear_resize_madds(Shape{y.channels(), oh, ow}));
    EXPECT_EQ(counted([&] { relu6(y); }), 0u);
    const int rows = rng.uniform_int(1, 30), cols = rng.uniform_int(1, 30);
    EXPECT_EQ(counted([&] { softmax_rows(Matrix(rows, cols, 0.5f)); }),
              softmax_madds(rows, cols));
  }
}

TEST(NetworkMadds, ReferenceBudgets) {
  const NetworkConfig cfg = NetworkConfig::defaults();
  const MaddsReport split9 = network_madds(cfg);
  const double params = static_cast<double>(count_params(cfg));
  EXPECT_NEAR(params, 5.320e6, 0.10 * 5.320e6);
  EXPECT_NEAR(static_cast<double>(split9.total_madds()), 9.567e9, 0.15 * 9.567e9);
  EXPECT_NEAR(static_cast<double>(network_madds(cfg.baseline()).total_madds()), 9.325e9,
              0.15 * 9.325e9);
}

TEST(NetworkMadds, SplitAndPlacementOrdering) {
  NetworkConfig cfg = NetworkConfig::defaults();
  auto total = [&](int split, std::vector<int> after) {
    NetworkConfig c = cfg;
    c.encoder.dnl.split = split;
    c.encoder.dnl.after_modules = std::move(after);
    return network_madds(c).total_madds();
  };
  const u64 base = network_madds(cfg.baseline()).total_madds();
  EXPECT_LT(base, total(9, {3, 4}));
  EXPECT_LT(total(9, {3, 4}), total(5, {3, 4}));
  EXPECT_LT(total(5, {3, 4}), total(3, {3, 4}));
  EXPECT_LT(total(3, {3, 4}), total(1, {3, 4}));
  EXPECT_LT(total(1, {3, 4}), total(1, {6}));
  EXPECT_LT(total(10, {6}), total(5, {6}));
  EXPECT_LT(total(5, {6}), total(1, {6}));
}

TEST(NetworkMadds, TotalsEqualSumOfEntries) {
  const MaddsReport r = network_madds(NetworkConfig::defaults());
  u64 madds = 0, params = 0;
  for (const auto& e : r.entries) {
    madds += e.madds;
    params += e.params;
  }
  EXPECT_EQ(r.total_madds(), madds);
  EXPECT_EQ(r.total_params(), params);
  EXPECT_NE(r.find("encoder.dnl3.vertical"), nullptr);
  EXPECT_NE(r.find("aspp.pool"), nullptr);
  EXPECT_EQ(r.find("no.such.layer"), nullptr);
}

TEST(NetworkMadds, SplitNineCutsQuadraticTermByNine) {
  NetworkConfig one = NetworkConfig::defaults();
  one.encoder.dnl.split = 1;
  const MaddsReport r1 = network_madds(one);
  const MaddsReport r9 = network_madds(NetworkConfig::defaults());
  for (const char* name : {"encoder.dnl3.vertical", "encoder.dnl3.horizontal",
                           "encoder.dnl4.vertical", "encoder.dnl4.horizontal"}) {
    const u64 channels = std::string(name).find("dnl3") != std::string::npos ? 32 : 64;
    const u64 lin = 2 * channels * 45 * 45 * 44;
    EXPECT_EQ((r1.find(name)->madds - lin), 9 * (r9.find(name)->madds - lin)) << name;
  }
}

TEST(CountParams, DnlIncreasesCountAndMatchesStore) {
  const NetworkConfig cfg = NetworkConfig::defaults();
  EXPECT_GT(count_params(cfg), count_params(cfg.baseline()));
  NetworkConfig one = cfg.baseline();
  one.encoder.dnl.after_modules = {3};
  EXPECT_GT(count_params(one), count_params(cfg.baseline()));
  EXPECT_GT(count_params(cfg), count_params(one));

  const NetworkPlan plan = build_plan(cfg);
  u64 learnable = 0, all = 0;
  for (const auto& spec : parameter_manifest(plan)) {
    all += spec.count();
    if (spec.learnable()) learnable += spec.count();
  }
  EXPECT_EQ(learnable, count_params(cfg));
  EXPECT_EQ(random_init(cfg, 1).total_scalars(), all);
}

TEST(InstrumentTrace, SmallNetworkMatchesClosedForm) {
  NetworkConfig cfg = NetworkConfig::defaults();
  cfg.input_height = 72;
  cfg.input_width = 80;
  const WeightStore store = random_init(cfg, 5);
  UniformRng rng(6);
  const Tensor image = random_tensor(Shape{3, 72, 80}, rng);
  const MaddsReport closed = network_madds(cfg);
  const MaddsReport traced = instrument_trace(cfg, store, image);
  const auto diff = diff_reports(closed, traced);
  for (const auto& d : diff) ADD_FAILURE() << d.layer << " " << d.expected << " " << d.actual;
  EXPECT_EQ(traced.total_madds(), closed.total_madds());
  ASSERT_EQ(traced.entries.size(), closed.entries.size());
  for (std::size_t n = 0; n < closed.entries.size(); ++n) {
    EXPECT_EQ(traced.entries[n].layer, closed.entries[n].layer);
    EXPECT_EQ(traced.entries[n].params, closed.entries[n].params) << closed.entries[n].layer;
  }
}

TEST(DiffReports, FlagsMissingAndExtraLayers) {
  MaddsReport a{{{"x", 1, 0}, {"y", 2, 0}}};
  MaddsReport b{{{"x", 1, 0}, {"z", 3, 0}}};
  const auto d = diff_reports(a, b);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].layer, "y");
  EXPECT_EQ(d[1].layer, "z");
  EXPECT_TRUE(diff_reports(a, a).empty());
}

TEST(Formatting, TsvAndReport) {
  MaddsReport r{{{"conv", 10, 4}, {"dnl", 7, 2}}};
  EXPECT_EQ(format_tsv(r), "conv\t10\t4\ndnl\t7\t2\n");
  const std::string text = format_report(r, "closed form");
  EXPECT_NE(text.find("madds=17"), std::string::npos);
  EXPECT_NE(text.find("params=6"), std::string::npos);
}

}  // namespace
}  // namespace dnl
