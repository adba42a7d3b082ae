#pragma once

#include <filesystem>

#include "signforge/numcore/tensor.hpp"

namespace signforge::dataio {

/// Reads a binary (P6) or ASCII (P3) PPM into an HxWx3 tensor scaled to
/// [0,1]. Throws IoError / FormatError on unreadable or malformed files.
numcore::Tensor read_ppm(const std::filesystem::path& path);

/// Writes an HxWx3 tensor in [0,1] as a binary P6 PPM (maxval 255).
void write_ppm(const std::filesystem::path& path, const numcore::Tensor& image);

/// Bilinear resize with half-pixel centers; a constant image stays constant.
numcore::Tensor resize_bilinear(const numcore::Tensor& image, std::size_t out_h,
                                std::size_t out_w);

}  // namespace signforge::dataio
