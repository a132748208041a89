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

#include "dnl/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dnl/errors.hpp"
#include "dnl/kernels.hpp"

namespace dnl {
namespace {

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  std::vector<float> values;  // interleaved, [0, 1]
};

std::string lower_ext(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

Raster read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  Raster r;
  r.width = static_cast<int>(image.width);
  r.height = static_cast<int>(image.height);
  r.channels = gray ? 1 : 3;
  r.values.resize(buffer.size());
  for (std::size_t n = 0; n < buffer.size(); ++n) r.values[n] = buffer[n] / 255.0f;
  return r;
}

// Minimal PNM reader for P2/P3 (ASCII) and P5/P6 (binary), maxval <= 65535.
Raster read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    return FormatError("malformed PNM " + path.string() + ": " + why);
  };
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw fail("unexpected end of header");
    return bytes.substr(start, pos - start);
  };
  auto number = [&]() {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw fail("expected a number, got '" + t + "'");
    }
    return std::stol(t);
  };

  const std::string magic = token();
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") throw fail("bad magic");
  Raster r;
  r.channels = (magic == "P3" || magic == "P6") ? 3 : 1;
  const long w = number(), h = number(), maxval = number();
  if (w < 1 || h < 1 || w > 65535 || h > 65535 || maxval < 1 || maxval > 65535) {
    throw fail("bad dimensions");
  }
  r.width = static_cast<int>(w);
  r.height = static_cast<int>(h);
  const std::size_t n = static_cast<std::size_t>(w) * h * r.channels;
  r.values.resize(n);
  if (magic == "P2" || magic == "P3") {
    for (auto& v : r.values) v = static_cast<float>(number()) / maxval;
    return r;
  }
  ++pos;  // single whitespace after maxval
  const std::size_t bps = maxval > 255 ? 2 : 1;
  if (bytes.size() < pos + n * bps) throw fail("truncated pixel data");
  for (std::size_t i = 0; i < n; ++i) {
    unsigned v = static_cast<unsigned char>(bytes[pos + i * bps]);
    if (bps == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos + i * bps + 1]);
    r.values[i] = static_cast<float>(v) / maxval;
  }
  return r;
}

Raster read_raster(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file " + path.string());
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  throw IoError("unsupported image format " + path.string());
}

}  // namespace

bool is_supported_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

Tensor load_image(const std::filesystem::path& path) {
  const Raster r = read_raster(path);
  Tensor out(Shape{3, r.height, r.width});
  for (int i = 0; i < r.height; ++i)
    for (int j = 0; j < r.width; ++j)
      for (int k = 0; k < 3; ++k) {
        const std::size_t px = static_cast<std::size_t>(i) * r.width + j;
        out.at(k, i, j) = r.channels == 1 ? r.values[px] : r.values[px * 3 + k];
      }
  return out;
}

Tensor load_grayscale(const std::filesystem::path& path) {
  const Raster r = read_raster(path);
  Tensor out(Shape{1, r.height, r.width});
  for (std::size_t px = 0; px < out.size(); ++px) {
    out.values()[px] = r.channels == 1 ? r.values[px]
                                       : (r.values[px * 3] + r.values[px * 3 + 1] +
                                          r.values[px * 3 + 2]) / 3.0f;
  }
  return out;
}

std::uint8_t quantize_unit(float v) {
  const float c = std::clamp(std::isnan(v) ? 0.0f : v, 0.0f, 1.0f);
  return static_cast<std::uint8_t>(std::floor(static_cast<double>(c) * 255.0 + 0.5));
}

void save_map(const Tensor& map, const std::filesystem::path& path) {
  if (map.channels() != 1) throw ConfigError("save_map expects a single-channel map");
  std::vector<std::uint8_t> pixels(map.size());
  for (std::size_t n = 0; n < pixels.size(); ++n) pixels[n] = quantize_unit(map.values()[n]);

  if (lower_ext(path) == ".pgm") {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out) throw IoError("failed writing " + path.string());
    return;
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(map.width());
  image.height = static_cast<png_uint_32>(map.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

Tensor prepare_input(const Tensor& rgb, int height, int width) {
  Tensor x = (rgb.height() == height && rgb.width() == width)
                 ? rgb
                 : bilinear_resize(rgb, height, width);
  for (float& v : x.values()) v = (v - kInputMean) / kInputStd;
  return x;
}

}  // namespace dnl
