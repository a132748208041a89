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

#include "dnl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dnl/errors.hpp"

namespace dnl {

void SaliencyEval::validate() const {
  const auto n = static_cast<std::size_t>(height) * width;
  if (height < 1 || width < 1 || prediction.size() != n || ground_truth.size() != n) {
    throw ConfigError("prediction and ground truth must both be " + std::to_string(height) + "x" +
                      std::to_string(width));
  }
  for (float g : ground_truth) {
    if (g != 0.0f && g != 1.0f) throw ConfigError("ground truth must be binary");
  }
}

void MetricsConfig::validate() const {
  if (!(beta2 > 0.0)) throw ConfigError("beta2 must be positive");
  if (thresholds.empty()) throw ConfigError("threshold list is empty");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw ConfigError("thresholds must be strictly increasing");
    }
  }
}

std::vector<double> MetricsConfig::even_thresholds(int n) {
  if (n < 2) return std::vector<double>(1, 0.5);
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = static_cast<double>(i) / (n - 1);
  return t;
}

double mae(const SaliencyEval& item, MaeMode mode, double binarize_at) {
  item.validate();
  double sum = 0.0;
  for (std::size_t n = 0; n < item.prediction.size(); ++n) {
    double p = item.prediction[n];
    if (mode == MaeMode::kBinarized) p = p > binarize_at ? 1.0 : 0.0;
    sum += std::abs(p - item.ground_truth[n]);
  }
  return sum / static_cast<double>(item.prediction.size());
}

double f_beta(double precision, double recall, double beta2) {
  const double denom = beta2 * precision + recall;
  if (denom <= 0.0) return 0.0;
  return (1.0 + beta2) * precision * recall / denom;
}

std::vector<double> normalize_prediction(std::span<const float> prediction) {
  std::vector<double> out(prediction.begin(), prediction.end());
  if (out.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double mn = *lo, mx = *hi;
  if (mx > mn) {
    const double range = mx - mn;
    for (double& v : out) v = (v - mn) / range;
  } else {
    for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::vector<CurvePoint> pr_curve(std::span<const SaliencyEval> dataset, const MetricsConfig& cfg) {
  cfg.validate();
  if (dataset.empty()) throw ConfigError("pr_curve: empty dataset");
  const auto& thr = cfg.thresholds;
  const std::size_t nt = thr.size();
  std::vector<double> precision_sum(nt, 0.0), recall_sum(nt, 0.0);

  // hist[b] counts pixels exceeding exactly the first b thresholds.
  std::vector<std::size_t> hist_all(nt + 1), hist_fg(nt + 1);
  for (const auto& item : dataset) {
    item.validate();
    std::fill(hist_all.begin(), hist_all.end(), 0);
    std::fill(hist_fg.begin(), hist_fg.end(), 0);
    const auto values = normalize_prediction(item.prediction);
    std::size_t fg = 0;
    for (std::size_t n = 0; n < values.size(); ++n) {
      const auto b = static_cast<std::size_t>(
          std::lower_bound(thr.begin(), thr.end(), values[n]) - thr.begin());
      ++hist_all[b];
      if (item.ground_truth[n] == 1.0f) {
        ++hist_fg[b];
        ++fg;
      }
    }
    std::size_t predicted = 0, hits = 0;
    for (std::size_t i = nt; i-- > 0;) {
      predicted += hist_all[i + 1];
      hits += hist_fg[i + 1];
      precision_sum[i] += predicted == 0 ? 1.0 : static_cast<double>(hits) / predicted;
      recall_sum[i] += fg == 0 ? 0.0 : static_cast<double>(hits) / fg;
    }
  }

  std::vector<CurvePoint> curve(nt);
  const auto count = static_cast<double>(dataset.size());
  for (std::size_t i = 0; i < nt; ++i) {
    curve[i].threshold = thr[i];
    curve[i].precision = precision_sum[i] / count;
    curve[i].recall = recall_sum[i] / count;
    curve[i].f_beta = f_beta(curve[i].precision, curve[i].recall, cfg.beta2);
  }
  return curve;
}

double max_f_measure(std::span<const SaliencyEval> dataset, const MetricsConfig& cfg) {
  double best = 0.0;
  for (const auto& p : pr_curve(dataset, cfg)) best = std::max(best, p.f_beta);
  return best;
}

double mean_mae(std::span<const SaliencyEval> dataset, const MetricsConfig& cfg) {
  if (dataset.empty()) throw ConfigError("mean_mae: empty dataset");
  double sum = 0.0;
  for (const auto& item : dataset) sum += mae(item, cfg.mae_mode, cfg.mae_binarize_at);
  return sum / static_cast<double>(dataset.size());
}

std::string format_curve_csv(std::span<const CurvePoint> curve) {
  std::ostringstream os;
  os << "threshold,precision,recall,fbeta\n";
  char line[128];
  for (const auto& p : curve) {
    std::snprintf(line, sizeof line, "%.6f,%.9f,%.9f,%.9f\n", p.threshold, p.precision, p.recall,
                  p.f_beta);
    os << line;
  }
  return os.str();
}

}  // namespace dnl
