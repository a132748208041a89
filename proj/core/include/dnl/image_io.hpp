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

#include "dnl/tensor.hpp"

namespace dnl {

// Decodes PNG or binary/ASCII PNM (P2/P3/P5/P6) into a 3 x H x W tensor in
// [0, 1]. Grayscale images are replicated to three channels.
Tensor load_image(const std::filesystem::path& path);

// Decodes to a single-channel 1 x H x W tensor in [0, 1] (RGB is averaged).
Tensor load_grayscale(const std::filesystem::path& path);

// Writes a 1 x H x W map as 8-bit grayscale; PNG unless the extension is
// .pgm. Values are clamped to [0, 1] and quantized with quantize_unit().
void save_map(const Tensor& map, const std::filesystem::path& path);

// floor(v * 255 + 0.5) after clamping: 0.5 maps to 128.
std::uint8_t quantize_unit(float v);

// Bilinear resize to (height, width) followed by (x - 0.5) / 0.5 per channel.
Tensor prepare_input(const Tensor& rgb, int height, int width);

inline constexpr float kInputMean = 0.5f;
inline constexpr float kInputStd = 0.5f;

bool is_supported_image(const std::filesystem::path& path);

}  // namespace dnl
