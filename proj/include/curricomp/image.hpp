#pragma once

#include <filesystem>

#include "curricomp/tensor.hpp"

namespace curricomp {

/// Decodes a binary PPM (P6, maxval 255) into an {H,W,3} tensor with pixel
/// values k/255 in [0,1]. Throws std::runtime_error with the file name on
/// any malformed input.
Tensor read_ppm(const std::filesystem::path& path);

/// Writes an {H,W,3} tensor as binary PPM; values are clamped to [0,1] and
/// rounded to 8 bits. Round-trips exactly for images already on the 8-bit
/// grid.
void write_ppm(const std::filesystem::path& path, const Tensor& image);

/// Format-dispatching loader (currently PPM only; other extensions produce
/// a clear "unsupported format" error so new decoders can slot in here).
Tensor load_image(const std::filesystem::path& path);

/// Bilinear resize to out_h x out_w (half-pixel centers, edge clamped).
/// Returns the input unchanged when the size already matches.
Tensor bilinear_resize(const Tensor& image, std::size_t out_h, std::size_t out_w);

}  // namespace curricomp
