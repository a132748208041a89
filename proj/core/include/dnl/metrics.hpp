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

#include <span>
#include <string>
#include <vector>

namespace dnl {

// A predicted map in [0, 1] and its binary ground truth, both H x W row-major.
struct SaliencyEval {
  int height = 0;
  int width = 0;
  std::vector<float> prediction;
  std::vector<float> ground_truth;  // 0 or 1

  // Throws ConfigError on shape mismatch or non-binary ground truth.
  void validate() const;
};

enum class MaeMode { kContinuous, kBinarized };

struct MetricsConfig {
  double beta2 = 0.3;
  std::vector<double> thresholds = even_thresholds(256);
  MaeMode mae_mode = MaeMode::kContinuous;
  // Threshold used to binarize predictions in MaeMode::kBinarized.
  double mae_binarize_at = 0.5;

  void validate() const;

  // n evenly spaced thresholds i / (n - 1), i = 0..n-1.
  static std::vector<double> even_thresholds(int n);
};

struct CurvePoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
};

// (1/HW) * sum |P - G|.
double mae(const SaliencyEval& item, MaeMode mode = MaeMode::kContinuous,
           double binarize_at = 0.5);

// (1 + b2) P R / (b2 P + R), 0 when the denominator is 0.
double f_beta(double precision, double recall, double beta2 = 0.3);

// Per threshold t, a pixel is predicted salient when its min-max normalized
// value is strictly greater than t. Precision and recall are averaged over
// the dataset, then combined into F-beta. With no predicted positives
// precision is 1; with an empty ground truth recall is 0.
std::vector<CurvePoint> pr_curve(std::span<const SaliencyEval> dataset, const MetricsConfig& cfg);

// Maximum F-beta over the threshold grid.
double max_f_measure(std::span<const SaliencyEval> dataset, const MetricsConfig& cfg);

// Dataset mean of mae().
double mean_mae(std::span<const SaliencyEval> dataset, const MetricsConfig& cfg);

// Min-max normalization of a prediction; constant maps are left unchanged
// (clamped to [0, 1]).
std::vector<double> normalize_prediction(std::span<const float> prediction);

// `threshold,precision,recall,fbeta` header plus one row per threshold.
std::string format_curve_csv(std::span<const CurvePoint> curve);

}  // namespace dnl
