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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnl/head.hpp"
#include "dnl/metrics.hpp"

namespace dnl::tools {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitIncomplete = 4;

// Model selection shared by every subcommand.
struct ModelOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> weights;
  std::optional<std::uint64_t> seed;
  std::optional<int> split;
  // "3,4", or "none" / "" for no DNL modules.
  std::optional<std::string> placements;
};

std::vector<int> parse_placements(const std::string& text);

// Config file (or defaults) with the --split / --placements overrides.
NetworkConfig resolve_config(const ModelOptions& opts);

// Loads --weights or draws random_init(--seed). When neither is given,
// `fallback_seed` is used if set, otherwise ConfigError.
WeightStore resolve_weights(const ModelOptions& opts, const NetworkConfig& cfg,
                            std::optional<std::uint64_t> fallback_seed = std::nullopt);

struct BenchmarkResult {
  std::vector<double> seconds;  // one per timed inference
  int warmup = 0;
  double mean() const;
  double median() const;
  double min() const;
  double total() const;
};

// `warmup` untimed passes, then `runs` timed sequential passes cycling over
// `inputs`. Inputs must already be in memory; only forward() is timed.
BenchmarkResult run_benchmark(const Network& net, std::span<const Tensor> inputs, int runs,
                              int warmup);

// Key-value lines: runs, warmup, mean_s, median_s, min_s, total_s.
std::string format_benchmark(const BenchmarkResult& r);

// Image files directly inside `path` (or `path` itself), sorted by name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& path);

// Prediction stem with a trailing "_saliency" removed.
std::string prediction_stem(const std::filesystem::path& path);

// Loads prediction/ground-truth pairs matched by stem; ground truth is
// binarized at 0.5. Throws ConfigError listing unmatched stems.
std::vector<SaliencyEval> load_eval_pairs(const std::filesystem::path& predictions,
                                          const std::filesystem::path& ground_truth);

// Parses arguments, runs one subcommand and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dnl::tools
