#pragma once

#include <string>

#include "gfl/image.hpp"

namespace gfl {

/// Loads an 8-bit PNG (grayscale or RGB), binary PGM (P5) or PPM (P6).
/// The container is detected from the file's magic bytes, not the
/// extension. Bytes map to samples as b / 255. 16-bit, palette and alpha
/// variants are rejected as UnsupportedFormat.
Image load_image(const std::string& path);

/// Saves as 8-bit PNG (or PGM/PPM when the path ends in .pgm/.ppm).
/// Samples are clamped to [0,1] and quantized as round(255 * x) with
/// halves rounding up.
void save_image(const Image& img, const std::string& path);

/// Quantization helper shared by the writers: clamp + round-half-up.
std::uint8_t quantize_sample(double v);

} // namespace gfl
