#pragma once

#include <cstdint>
#include <vector>

#include "gfl/error.hpp"

namespace gfl {

/// H x W x C grid of double samples in planar layout:
/// data[(c*height + y)*width + x]. Pixel images hold values in [0,1];
/// intermediate grids (pyramid coefficients, filtered residuals) reuse the
/// same container and may leave that range.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> data;

  Image() = default;
  Image(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
             static_cast<std::size_t>(c), 0.0) {}

  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  const double* plane(int c) const {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
  double* plane(int c) {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }

  std::size_t size() const { return data.size(); }

  bool same_shape(const Image& other) const {
    return height == other.height && width == other.width &&
           channels == other.channels;
  }
};

/// Checks the pixel-image contract: 1 or 3 channels, dims at least 8x8,
/// buffer size consistent, all samples finite. Throws InvalidImage.
void validate_image(const Image& img);

/// True when every sample is finite.
bool all_finite(const Image& img);

/// Rec.601 luma (0.299/0.587/0.114). Single-channel input is returned as is.
Image to_grayscale(const Image& img);

/// Integer-factor reduction with a separable Catmull-Rom (a = -0.5) kernel
/// sampled at the centers of factor x factor blocks; borders edge-clamped.
/// Dims must be divisible by factor.
Image downscale_bicubic(const Image& img, int factor);

/// Integer-factor enlargement, same kernel and center-aligned sampling.
Image upscale_bicubic(const Image& img, int factor);

/// out = clamp(img + n, 0, 1), n ~ N(mu, sigma^2) i.i.d. per sample.
/// Samples are consumed in buffer order (channel-major, then row-major),
/// so a given seed is bit-reproducible.
Image add_gaussian_noise(const Image& img, double sigma, double mu,
                         std::uint64_t seed);

/// Clamps every sample into [0,1].
Image clamp01(Image img);

} // namespace gfl
