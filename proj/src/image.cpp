#include "gfl/image.hpp"

#include <algorithm>
#include <cmath>

#include "gfl/rng.hpp"

namespace gfl {

namespace {

// Catmull-Rom weight (bicubic with a = -0.5).
double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return a * (((t - 5.0) * t + 8.0) * t - 4.0);
  return 0.0;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Samples one channel plane at fractional position (y, x) with the 4x4
// Catmull-Rom footprint and edge-clamped borders.
double sample_bicubic(const double* plane, int height, int width, double y,
                      double x) {
  const int y0 = static_cast<int>(std::floor(y));
  const int x0 = static_cast<int>(std::floor(x));
  double wy[4], wx[4];
  for (int k = 0; k < 4; ++k) {
    wy[k] = cubic_weight(y - (y0 - 1 + k));
    wx[k] = cubic_weight(x - (x0 - 1 + k));
  }
  double acc = 0.0;
  for (int ky = 0; ky < 4; ++ky) {
    const int sy = clamp_index(y0 - 1 + ky, height);
    double row = 0.0;
    for (int kx = 0; kx < 4; ++kx) {
      const int sx = clamp_index(x0 - 1 + kx, width);
      row += wx[kx] * plane[static_cast<std::size_t>(sy) * width + sx];
    }
    acc += wy[ky] * row;
  }
  return acc;
}

} // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionNotDivisible: return "DimensionNotDivisible";
    case ErrorCode::OddDimensions: return "OddDimensions";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::AsymmetricSpectrum: return "AsymmetricSpectrum";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EpochOutOfOrder: return "EpochOutOfOrder";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
  }
  return "UnknownError";
}

bool all_finite(const Image& img) {
  for (double v : img.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void validate_image(const Image& img) {
  if (img.channels != 1 && img.channels != 3)
    fail(ErrorCode::InvalidImage, "channel count must be 1 or 3");
  if (img.height < 8 || img.width < 8)
    fail(ErrorCode::InvalidImage, "image must be at least 8x8");
  const std::size_t expected = static_cast<std::size_t>(img.height) *
                               img.width * img.channels;
  if (img.data.size() != expected)
    fail(ErrorCode::InvalidImage, "buffer size does not match dimensions");
  if (!all_finite(img))
    fail(ErrorCode::InvalidImage, "image contains non-finite samples");
}

Image to_grayscale(const Image& img) {
  if (img.channels == 1) return img;
  if (img.channels != 3)
    fail(ErrorCode::InvalidImage, "channel count must be 1 or 3");
  Image out(img.height, img.width, 1);
  const double* r = img.plane(0);
  const double* g = img.plane(1);
  const double* b = img.plane(2);
#pragma omp parallel for schedule(static) if (img.height >= 64)
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      out.data[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    }
  }
  return out;
}

Image downscale_bicubic(const Image& img, int factor) {
  if (factor < 2) fail(ErrorCode::InvalidConfig, "factor must be >= 2");
  if (img.height % factor != 0 || img.width % factor != 0)
    fail(ErrorCode::DimensionNotDivisible,
         "dimensions must be divisible by the scale factor");
  const int oh = img.height / factor;
  const int ow = img.width / factor;
  Image out(oh, ow, img.channels);
  const double offset = (factor - 1) / 2.0; // block center
  for (int c = 0; c < img.channels; ++c) {
    const double* src = img.plane(c);
    double* dst = out.plane(c);
#pragma omp parallel for schedule(static) if (oh >= 32)
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        dst[static_cast<std::size_t>(y) * ow + x] =
            sample_bicubic(src, img.height, img.width,
                           y * static_cast<double>(factor) + offset,
                           x * static_cast<double>(factor) + offset);
      }
    }
  }
  return out;
}

Image upscale_bicubic(const Image& img, int factor) {
  if (factor < 2) fail(ErrorCode::InvalidConfig, "factor must be >= 2");
  const int oh = img.height * factor;
  const int ow = img.width * factor;
  Image out(oh, ow, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    const double* src = img.plane(c);
    double* dst = out.plane(c);
#pragma omp parallel for schedule(static) if (oh >= 64)
    for (int y = 0; y < oh; ++y) {
      const double sy = (y + 0.5) / factor - 0.5;
      for (int x = 0; x < ow; ++x) {
        const double sx = (x + 0.5) / factor - 0.5;
        dst[static_cast<std::size_t>(y) * ow + x] =
            sample_bicubic(src, img.height, img.width, sy, sx);
      }
    }
  }
  return out;
}

Image add_gaussian_noise(const Image& img, double sigma, double mu,
                         std::uint64_t seed) {
  if (sigma < 0.0) fail(ErrorCode::InvalidConfig, "sigma must be >= 0");
  Image out = img;
  GaussianStream stream(seed);
  // serial: the per-sample consumption order is part of the contract
  for (double& v : out.data) {
    v = std::clamp(v + mu + sigma * stream.next(), 0.0, 1.0);
  }
  return out;
}

Image clamp01(Image img) {
  for (double& v : img.data) v = std::clamp(v, 0.0, 1.0);
  return img;
}

} // namespace gfl
