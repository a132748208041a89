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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dnl/errors.hpp"
#include "dnl/metrics.hpp"
#include "dnl/random.hpp"

namespace dnl {
namespace {

SaliencyEval make_eval(int h, int w, std::vector<float> p, std::vector<float> g) {
  return SaliencyEval{h, w, std::move(p), std::move(g)};
}

SaliencyEval random_eval(UniformRng& rng, int h, int w) {
  SaliencyEval e{h, w, std::vector<float>(h * w), std::vector<float>(h * w)};
  for (auto& v : e.prediction) v = rng.uniform(0.0f, 1.0f);
  const int mode = rng.uniform_int(0, 9);
  for (auto& g : e.ground_truth) {
    g = mode == 0 ? 0.0f : (rng.uniform(0.0f, 1.0f) < 0.4f ? 1.0f : 0.0f);
  }
  if (mode == 1) std::fill(e.prediction.begin(), e.prediction.end(), 0.3f);
  if (mode == 2) {
    for (auto& v : e.prediction) v = static_cast<float>(rng.uniform_int(0, 4)) / 4.0f;
  }
  return e;
}

// Straight per-threshold counting over every pixel of every image.
struct OracleCurve {
  std::vector<double> precision, recall, f;
};

OracleCurve brute_force(const std::vector<SaliencyEval>& data, const std::vector<double>& thr,
                        double beta2) {
  OracleCurve out;
  for (double t : thr) {
    double ps = 0.0, rs = 0.0;
    for (const auto& e : data) {
      double lo = 1e300, hi = -1e300;
      for (float v : e.prediction) {
        lo = std::min(lo, double(v));
        hi = std::max(hi, double(v));
      }
      long tp = 0, pred = 0, pos = 0;
      for (std::size_t n = 0; n < e.prediction.size(); ++n) {
        double v = e.prediction[n];
        v = hi > lo ? (v - lo) / (hi - lo) : std::clamp(v, 0.0, 1.0);
        const bool on = v > t;
        const bool fg = e.ground_truth[n] == 1.0f;
        pred += on;
        pos += fg;
        tp += on && fg;
      }
      ps += pred == 0 ? 1.0 : double(tp) / pred;
      rs += pos == 0 ? 0.0 : double(tp) / pos;
    }
    const double p = ps / data.size(), r = rs / data.size();
    out.precision.push_back(p);
    out.recall.push_back(r);
    out.f.push_back(beta2 * p + r > 0 ? (1 + beta2) * p * r / (beta2 * p + r) : 0.0);
  }
  return out;
}

TEST(Mae, Examples) {
  const std::vector<float> g{1, 0, 0, 1};
  EXPECT_EQ(mae(make_eval(2, 2, g, g)), 0.0);
  EXPECT_EQ(mae(make_eval(2, 2, {0, 1, 1, 0}, g)), 1.0);
  EXPECT_DOUBLE_EQ(mae(make_eval(2, 2, {1, 0, 1, 0}, {1, 1, 0, 0})), 0.5);
}

TEST(Mae, BoundsAndComplements) {
  UniformRng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    SaliencyEval e = random_eval(rng, 6, 7);
    const double m = mae(e);
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
    SaliencyEval flipped_gt = e;
    for (auto& g : flipped_gt.ground_truth) g = 1.0f - g;
    EXPECT_NEAR(m + mae(flipped_gt), 1.0, 1e-9);
    SaliencyEval both = flipped_gt;
    for (auto& p : both.prediction) p = 1.0f - p;
    EXPECT_NEAR(mae(both), m, 1e-6);
  }
}

TEST(Mae, BinarizedMode) {
  const SaliencyEval e = make_eval(1, 4, {0.2f, 0.6f, 0.5f, 0.9f}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(mae(e, MaeMode::kBinarized, 0.5), 0.5);
  EXPECT_NEAR(mae(e), (0.2 + 0.6 + 0.5 + 0.1) / 4.0, 1e-7);
}

TEST(Mae, Errors) {
  EXPECT_THROW(mae(make_eval(2, 2, {0, 0, 0}, {0, 0, 0, 0})), ConfigError);
  EXPECT_THROW(mae(make_eval(1, 2, {0, 0}, {0.5f, 0})), ConfigError);
  const std::vector<SaliencyEval> empty;
  EXPECT_THROW(mean_mae(empty, MetricsConfig{}), ConfigError);
}

TEST(FBeta, Examples) {
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) EXPECT_NEAR(f_beta(x, x), x, 1e-15);
  EXPECT_EQ(f_beta(0.8, 0.0), 0.0);
  EXPECT_NEAR(f_beta(0.6, 0.3, 0.3), 0.4875, 1e-12);
  UniformRng rng(2);
  for (int n = 0; n < 100; ++n) {
    const double f = f_beta(rng.uniform(0.0f, 1.0f), rng.uniform(0.0f, 1.0f));
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(PrCurve, PerfectBinaryPair) {
  const std::vector<float> g{1, 0, 0, 1, 1, 0};
  const std::vector<SaliencyEval> data{make_eval(2, 3, g, g)};
  MetricsConfig cfg;
  cfg.thresholds = {0.25, 0.5, 0.75};
  const auto curve = pr_curve(data, cfg);
  EXPECT_EQ(curve[1].threshold, 0.5);
  EXPECT_EQ(curve[1].precision, 1.0);
  EXPECT_EQ(curve[1].recall, 1.0);
}

TEST(PrCurve, UniformOnePrediction) {
  const std::vector<SaliencyEval> data{
      make_eval(2, 2, {1, 1, 1, 1}, {1, 1, 0, 0})};
  const MetricsConfig cfg;
  for (const auto& p : pr_curve(data, cfg)) {
    if (p.threshold < 1.0) {
      EXPECT_EQ(p.recall, 1.0);
      EXPECT_EQ(p.precision, 0.5);
    }
  }
}

TEST(MaxF, Examples) {
  const std::vector<float> g{1, 0, 0, 1};
  const MetricsConfig cfg;
  const std::vector<SaliencyEval> perfect{make_eval(2, 2, g, g)};
  EXPECT_DOUBLE_EQ(max_f_measure(perfect, cfg), 1.0);
  const std::vector<SaliencyEval> zeros{make_eval(2, 2, {0, 0, 0, 0}, g)};
  EXPECT_EQ(max_f_measure(zeros, cfg), 0.0);
  const std::vector<SaliencyEval> empty;
  EXPECT_THROW(max_f_measure(empty, cfg), ConfigError);
  EXPECT_THROW(pr_curve(empty, cfg), ConfigError);
}

TEST(PrCurve, MatchesExhaustiveOracle) {
  UniformRng rng(3);
  const MetricsConfig cfg;
  ASSERT_EQ(cfg.thresholds.size(), 256u);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SaliencyEval> data{random_eval(rng, 8, 8)};
    const OracleCurve oracle = brute_force(data, cfg.thresholds, cfg.beta2);
    const auto curve = pr_curve(data, cfg);
    double best = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      EXPECT_NEAR(curve[i].precision, oracle.precision[i], 1e-9);
      EXPECT_NEAR(curve[i].recall, oracle.recall[i], 1e-9);
      EXPECT_NEAR(curve[i].f_beta, oracle.f[i], 1e-9);
      best = std::max(best, oracle.f[i]);
    }
    EXPECT_NEAR(max_f_measure(data, cfg), best, 1e-9);
  }
}

TEST(PrCurve, DatasetAverageIsOrderIndependent) {
  UniformRng rng(4);
  std::vector<SaliencyEval> data;
  for (int n = 0; n < 12; ++n) data.push_back(random_eval(rng, 8, 8));
  const MetricsConfig cfg;
  const OracleCurve oracle = brute_force(data, cfg.thresholds, cfg.beta2);
  const auto a = pr_curve(data, cfg);
  std::reverse(data.begin(), data.end());
  const auto b = pr_curve(data, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].f_beta, b[i].f_beta, 1e-9);
    EXPECT_NEAR(a[i].f_beta, oracle.f[i], 1e-9);
  }
  EXPECT_NEAR(mean_mae(data, cfg), [&] {
    double s = 0.0;
    for (const auto& e : data) s += mae(e);
    return s / data.size();
  }(), 1e-12);
}

// Values sit at bin centres so that float rounding of the rescaled map
// cannot move a pixel across a threshold.
TEST(MaxF, InvariantUnderPositiveAffineRescaling) {
  UniformRng rng(5);
  const MetricsConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    SaliencyEval e = random_eval(rng, 8, 8);
    for (auto& v : e.prediction) v = (rng.uniform_int(0, 254) + 0.5f) / 255.0f;
    e.prediction[0] = 0.0f;
    e.prediction[1] = 1.0f;
    const std::vector<SaliencyEval> base{e};
    const float scale = rng.uniform(0.1f, 4.0f), shift = rng.uniform(-2.0f, 2.0f);
    SaliencyEval moved = e;
    for (auto& v : moved.prediction) v = v * scale + shift;
    const std::vector<SaliencyEval> rescaled{moved};
    EXPECT_NEAR(max_f_measure(base, cfg), max_f_measure(rescaled, cfg), 1e-12);
  }
}

TEST(MetricsConfig, Validation) {
  MetricsConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.beta2 = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.beta2 = 0.3;
  cfg.thresholds = {0.1, 0.1};
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_EQ(MetricsConfig::even_thresholds(256).back(), 1.0);
  EXPECT_NEAR(MetricsConfig::even_thresholds(256)[128], 128.0 / 255.0, 1e-15);
}

TEST(CurveCsv, OneRowPerThreshold) {
  UniformRng rng(6);
  const std::vector<SaliencyEval> data{random_eval(rng, 8, 8)};
  const MetricsConfig cfg;
  const std::string csv = format_curve_csv(pr_curve(data, cfg));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "threshold,precision,recall,fbeta");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, cfg.thresholds.size());
}

}  // namespace
}  // namespace dnl
