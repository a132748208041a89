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

#include "dnl_tools/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "dnl/complexity.hpp"
#include "dnl/errors.hpp"
#include "dnl/image_io.hpp"
#include "dnl/kernels.hpp"
#include "dnl/random.hpp"

namespace dnl::tools {
namespace fs = std::filesystem;

namespace {

constexpr int kMaxSyntheticImages = 10;

Tensor synthetic_image(const NetworkConfig& cfg, std::uint64_t seed, int index) {
  Tensor img(Shape{3, cfg.input_height, cfg.input_width});
  UniformRng rng(seed, "image-" + std::to_string(index));
  rng.fill(img.values(), -1.0f, 1.0f);
  return img;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

struct LoadedImage {
  fs::path source;
  int height = 0;
  int width = 0;
  Tensor input;
};

std::vector<LoadedImage> load_inputs(const fs::path& path, const NetworkConfig& cfg) {
  std::vector<LoadedImage> out;
  for (const auto& file : list_images(path)) {
    const Tensor rgb = load_image(file);
    out.push_back({file, rgb.height(), rgb.width(),
                   prepare_input(rgb, cfg.input_height, cfg.input_width)});
  }
  return out;
}

std::string dnl_summary(const MaddsReport& r) {
  std::uint64_t madds = 0, params = 0;
  for (const auto& e : r.entries) {
    if (e.layer.find(".dnl") != std::string::npos) {
      madds += e.madds;
      params += e.params;
    }
  }
  std::ostringstream os;
  os << "dnl_madds=" << madds << "\n" << "dnl_params=" << params << "\n";
  return os.str();
}

// Options registered on each subcommand.
struct CliState {
  ModelOptions model;
  std::string input;
  std::string out;
  std::string gt;
  std::string mae_mode = "continuous";
  int runs = 50;
  int warmup = 3;
  int threads = 1;
  bool instrument = false;
  std::uint64_t seed = 0;
  std::string weights;
  std::string config;
  int split = 0;
  std::string placements;
};

void add_model_options(CLI::App* cmd, CliState& s, bool needs_weights) {
  cmd->add_option("--config", s.config, "Network config file (YAML)")->check(CLI::ExistingFile);
  cmd->add_option("--split", s.split, "Override the DNL split count")->check(CLI::PositiveNumber);
  cmd->add_option("--placements", s.placements,
                  "Override DNL placements, e.g. 3,4 or 6; 'none' for the baseline");
  if (needs_weights) {
    auto* w = cmd->add_option("--weights", s.weights, "Weights file");
    auto* seed = cmd->add_option("--seed", s.seed, "Use random weights drawn from this seed");
    w->excludes(seed);
    seed->excludes(w);
  }
}

ModelOptions model_options(const CLI::App* cmd, const CliState& s) {
  ModelOptions m;
  if (cmd->count("--config")) m.config = s.config;
  if (cmd->count("--split")) m.split = s.split;
  if (cmd->count("--placements")) m.placements = s.placements;
  if (cmd->get_option_no_throw("--weights") != nullptr && cmd->count("--weights")) {
    m.weights = s.weights;
  }
  if (cmd->get_option_no_throw("--seed") != nullptr && cmd->count("--seed")) m.seed = s.seed;
  return m;
}

int cmd_infer(const CLI::App* cmd, const CliState& s, std::ostream& out) {
  const ModelOptions opts = model_options(cmd, s);
  const NetworkConfig cfg = resolve_config(opts);
  const Network net(cfg, resolve_weights(opts, cfg));
  const std::vector<LoadedImage> images = load_inputs(s.input, cfg);
  if (images.empty()) throw IoError("no images found in " + s.input);

  // Everything is loaded; outputs may be written from here on.
  const fs::path out_dir(s.out);
  ensure_directory(out_dir);
  for (const auto& img : images) {
    Tensor map = net.forward(img.input);
    if (map.height() != img.height || map.width() != img.width) {
      map = bilinear_resize(map, img.height, img.width);
    }
    const fs::path dest = out_dir / (img.source.stem().string() + "_saliency.png");
    save_map(map, dest);
    out << dest.string() << "\n";
  }
  out << "wrote " << images.size() << " saliency map(s)\n";
  return kExitOk;
}

int cmd_benchmark(const CLI::App* cmd, const CliState& s, std::ostream& out) {
  if (s.threads != 1) {
    throw ConfigError("benchmark runs on exactly one compute thread; got --threads " +
                      std::to_string(s.threads));
  }
  const ModelOptions opts = model_options(cmd, s);
  const NetworkConfig cfg = resolve_config(opts);
  const Network net(cfg, resolve_weights(opts, cfg));
  std::vector<Tensor> inputs;
  if (!s.input.empty()) {
    for (auto& img : load_inputs(s.input, cfg)) inputs.push_back(std::move(img.input));
    if (inputs.empty()) throw IoError("no images found in " + s.input);
  } else {
    const int n = std::min(s.runs, kMaxSyntheticImages);
    for (int i = 0; i < n; ++i) inputs.push_back(synthetic_image(cfg, opts.seed.value_or(0), i));
  }
  const BenchmarkResult r = run_benchmark(net, inputs, s.runs, s.warmup);
  const std::string report = format_benchmark(r);
  out << report;
  if (!s.out.empty()) write_text(s.out, report);
  return kExitOk;
}

int cmd_eval(const CliState& s, std::ostream& out) {
  MetricsConfig mcfg;
  if (s.mae_mode == "binarized") {
    mcfg.mae_mode = MaeMode::kBinarized;
  } else if (s.mae_mode != "continuous") {
    throw ConfigError("--mae-mode must be continuous or binarized");
  }
  const std::vector<SaliencyEval> data = load_eval_pairs(s.input, s.gt);
  const auto curve = pr_curve(data, mcfg);
  double max_f = 0.0;
  for (const auto& p : curve) max_f = std::max(max_f, p.f_beta);
  std::ostringstream summary;
  summary.precision(6);
  summary << std::fixed << "images=" << data.size() << "\n"
          << "maxF=" << max_f << "\n"
          << "MAE=" << mean_mae(data, mcfg) << "\n";
  out << summary.str();
  if (!s.out.empty()) {
    const fs::path dir(s.out);
    ensure_directory(dir);
    write_text(dir / "summary.txt", summary.str());
    write_text(dir / "curve.csv", format_curve_csv(curve));
  }
  return kExitOk;
}

int cmd_analyze(const CLI::App* cmd, const CliState& s, std::ostream& out) {
  const ModelOptions opts = model_options(cmd, s);
  const NetworkConfig cfg = resolve_config(opts);
  const MaddsReport closed = network_madds(cfg);
  std::string report = format_report(closed, "closed form") + dnl_summary(closed);
  std::string instrumented_tsv;
  std::size_t mismatches = 0;
  if (s.instrument) {
    const WeightStore store = resolve_weights(opts, cfg, 0);
    const MaddsReport traced = instrument_trace(cfg, store, synthetic_image(cfg, 0, 0));
    const auto diff = diff_reports(closed, traced);
    mismatches = diff.size();
    std::ostringstream os;
    os << "\n" << format_report(traced, "instrumented") << "\n== diff ==\n";
    for (const auto& d : diff) {
      os << d.layer << " expected=" << d.expected << " actual=" << d.actual << "\n";
    }
    os << "mismatches=" << mismatches << "\n";
    report += os.str();
    instrumented_tsv = format_tsv(traced);
  }
  out << report;
  if (!s.out.empty()) {
    const fs::path dir(s.out);
    ensure_directory(dir);
    write_text(dir / "report.txt", report);
    write_text(dir / "madds.tsv", format_tsv(closed));
    if (s.instrument) write_text(dir / "instrumented.tsv", instrumented_tsv);
  }
  return mismatches == 0 ? kExitOk : kExitFailure;
}

}  // namespace

std::vector<int> parse_placements(const std::string& text) {
  std::vector<int> out;
  if (text.empty() || text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad --placements entry '" + item + "'");
    }
  }
  return out;
}

NetworkConfig resolve_config(const ModelOptions& opts) {
  NetworkConfig cfg =
      opts.config ? load_network_config(*opts.config) : NetworkConfig::defaults();
  if (opts.split) cfg.encoder.dnl.split = *opts.split;
  if (opts.placements) cfg.encoder.dnl.after_modules = parse_placements(*opts.placements);
  cfg.validate();
  build_plan(cfg);
  return cfg;
}

WeightStore resolve_weights(const ModelOptions& opts, const NetworkConfig& cfg,
                            std::optional<std::uint64_t> fallback_seed) {
  if (opts.weights && opts.seed) throw ConfigError("--weights and --seed are mutually exclusive");
  if (opts.weights) return load_weights(*opts.weights);
  if (opts.seed) return random_init(cfg, *opts.seed);
  if (fallback_seed) return random_init(cfg, *fallback_seed);
  throw ConfigError("one of --weights or --seed is required");
}

double BenchmarkResult::mean() const { return seconds.empty() ? 0.0 : total() / seconds.size(); }

double BenchmarkResult::median() const {
  if (seconds.empty()) return 0.0;
  std::vector<double> v = seconds;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double BenchmarkResult::min() const {
  return seconds.empty() ? 0.0 : *std::min_element(seconds.begin(), seconds.end());
}

double BenchmarkResult::total() const {
  return std::accumulate(seconds.begin(), seconds.end(), 0.0);
}

BenchmarkResult run_benchmark(const Network& net, std::span<const Tensor> inputs, int runs,
                              int warmup) {
  if (inputs.empty()) throw ConfigError("benchmark needs at least one input");
  if (runs < 1 || warmup < 0) throw ConfigError("benchmark needs runs >= 1 and warmup >= 0");
  using Clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) net.forward(inputs[i % inputs.size()]);
  BenchmarkResult r;
  r.warmup = warmup;
  r.seconds.reserve(runs);
  for (int i = 0; i < runs; ++i) {
    const Tensor& x = inputs[i % inputs.size()];
    const auto t0 = Clock::now();
    const Tensor y = net.forward(x);
    const auto t1 = Clock::now();
    r.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return r;
}

std::string format_benchmark(const BenchmarkResult& r) {
  std::ostringstream os;
  os.precision(6);
  os << "runs=" << r.seconds.size() << "\n"
     << "warmup=" << r.warmup << "\n"
     << std::fixed << "mean_s=" << r.mean() << "\n"
     << "median_s=" << r.median() << "\n"
     << "min_s=" << r.min() << "\n"
     << "total_s=" << r.total() << "\n";
  return os.str();
}

std::vector<fs::path> list_images(const fs::path& path) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(path)) {
    out.push_back(path);
    return out;
  }
  if (!fs::is_directory(path)) throw IoError("no such file or directory " + path.string());
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && is_supported_image(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string prediction_stem(const fs::path& path) {
  std::string stem = path.stem().string();
  constexpr std::string_view suffix = "_saliency";
  if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
    stem.resize(stem.size() - suffix.size());
  }
  return stem;
}

std::vector<SaliencyEval> load_eval_pairs(const fs::path& predictions,
                                          const fs::path& ground_truth) {
  std::map<std::string, fs::path> preds, gts;
  for (const auto& p : list_images(predictions)) preds[prediction_stem(p)] = p;
  for (const auto& g : list_images(ground_truth)) gts[g.stem().string()] = g;

  std::vector<std::string> unmatched;
  for (const auto& [stem, path] : preds) {
    if (!gts.count(stem)) unmatched.push_back(stem + " (prediction only)");
  }
  for (const auto& [stem, path] : gts) {
    if (!preds.count(stem)) unmatched.push_back(stem + " (ground truth only)");
  }
  if (!unmatched.empty() || preds.empty()) {
    std::string msg = preds.empty() ? "no predictions found" : "unmatched stems:";
    for (const auto& u : unmatched) msg += " " + u;
    throw ConfigError(msg);
  }

  std::vector<SaliencyEval> out;
  for (const auto& [stem, pred_path] : preds) {
    const Tensor p = load_grayscale(pred_path);
    const Tensor g = load_grayscale(gts.at(stem));
    if (p.shape() != g.shape()) {
      throw ConfigError("prediction and ground truth sizes differ for " + stem);
    }
    SaliencyEval e{p.height(), p.width(), {p.values().begin(), p.values().end()}, {}};
    e.ground_truth.reserve(g.size());
    for (float v : g.values()) e.ground_truth.push_back(v >= 0.5f ? 1.0f : 0.0f);
    out.push_back(std::move(e));
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depthwise non-local saliency network: inference, timing, evaluation, analysis"};
  app.require_subcommand(1);
  CliState s;

  auto* infer = app.add_subcommand("infer", "Write <stem>_saliency.png for each input image");
  add_model_options(infer, s, true);
  infer->add_option("--input", s.input, "Image file or directory")->required();
  infer->add_option("--out", s.out, "Output directory")->required();

  auto* bench = app.add_subcommand("benchmark", "Time single-thread inference");
  add_model_options(bench, s, true);
  bench->add_option("--input", s.input, "Image file or directory (default: synthetic)");
  bench->add_option("--out", s.out, "Also write the timing report to this file");
  bench->add_option("--runs", s.runs, "Timed inferences")->capture_default_str();
  bench->add_option("--warmup", s.warmup, "Untimed warm-up inferences")->capture_default_str();
  bench->add_option("--threads", s.threads, "Compute threads (must be 1)")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Compute maxF, MAE and the PR curve");
  eval->add_option("--input", s.input, "Directory of predicted maps")->required();
  eval->add_option("--gt", s.gt, "Directory of ground-truth masks")->required();
  eval->add_option("--out", s.out, "Directory for summary.txt and curve.csv");
  eval->add_option("--mae-mode", s.mae_mode, "continuous or binarized")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Report parameters and MAdds per layer");
  add_model_options(analyze, s, true);
  analyze->add_flag("--instrument", s.instrument, "Also count MAdds during a real forward pass");
  analyze->add_option("--out", s.out, "Directory for report.txt and madds.tsv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (infer->parsed()) return cmd_infer(infer, s, out);
    if (bench->parsed()) return cmd_benchmark(bench, s, out);
    if (eval->parsed()) return cmd_eval(s, out);
    if (analyze->parsed()) return cmd_analyze(analyze, s, out);
  } catch (const IncompleteModelError& e) {
    err << "error: incomplete model: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace dnl::tools
