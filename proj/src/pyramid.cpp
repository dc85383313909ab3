#include "gfl/pyramid.hpp"

namespace gfl {

namespace {

constexpr double kAnalysis[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
constexpr double kSynthesis[5] = {1.0 / 8, 4.0 / 8, 6.0 / 8, 4.0 / 8, 1.0 / 8};

// Separable circular convolution with a symmetric 5-tap kernel.
Image blur5_circular(const Image& in, const double k[5]) {
  const int h = in.height, w = in.width;
  Image tmp(h, w, in.channels);
  Image out(h, w, in.channels);
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.plane(c);
    double* mid = tmp.plane(c);
    double* dst = out.plane(c);
    // horizontal pass
#pragma omp parallel for schedule(static) if (h >= 64)
    for (int y = 0; y < h; ++y) {
      const double* row = src + static_cast<std::size_t>(y) * w;
      double* orow = mid + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int t = -2; t <= 2; ++t) {
          const int xx = (x + t + w) % w;
          acc += k[t + 2] * row[xx];
        }
        orow[x] = acc;
      }
    }
    // vertical pass
#pragma omp parallel for schedule(static) if (h >= 64)
    for (int y = 0; y < h; ++y) {
      double* orow = dst + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int t = -2; t <= 2; ++t) {
          const int yy = (y + t + h) % h;
          acc += k[t + 2] * mid[static_cast<std::size_t>(yy) * w + x];
        }
        orow[x] = acc;
      }
    }
  }
  return out;
}

Image decimate2(const Image& in) {
  Image out(in.height / 2, in.width / 2, in.channels);
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.plane(c);
    double* dst = out.plane(c);
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        dst[static_cast<std::size_t>(y) * out.width + x] =
            src[static_cast<std::size_t>(2 * y) * in.width + 2 * x];
  }
  return out;
}

Image zero_insert2(const Image& in) {
  Image out(in.height * 2, in.width * 2, in.channels);
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.plane(c);
    double* dst = out.plane(c);
    for (int y = 0; y < in.height; ++y)
      for (int x = 0; x < in.width; ++x)
        dst[static_cast<std::size_t>(2 * y) * out.width + 2 * x] =
            src[static_cast<std::size_t>(y) * in.width + x];
  }
  return out;
}

void require_even(const Image& img, const char* op) {
  if (img.height % 2 != 0 || img.width % 2 != 0)
    fail(ErrorCode::OddDimensions, std::string(op) + " requires even dims");
}

Image subtract(const Image& a, const Image& b) {
  Image out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

Image add(const Image& a, const Image& b) {
  Image out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

} // namespace

Image downsample(const Image& grid) {
  require_even(grid, "downsample");
  return decimate2(blur5_circular(grid, kAnalysis));
}

Image upsample(const Image& grid) {
  return blur5_circular(zero_insert2(grid), kSynthesis);
}

Image downsample_adjoint(const Image& grid) {
  return blur5_circular(zero_insert2(grid), kAnalysis);
}

Image upsample_adjoint(const Image& grid) {
  require_even(grid, "upsample_adjoint");
  return decimate2(blur5_circular(grid, kSynthesis));
}

LaplacianPyramid build_laplacian(const Image& img, int depth) {
  if (depth < 1) fail(ErrorCode::InvalidConfig, "depth must be >= 1");
  const int div = 1 << depth;
  if (img.height % div != 0 || img.width % div != 0)
    fail(ErrorCode::DepthTooLarge,
         "dimensions not divisible by 2^depth");
  if (img.height / div < 8 || img.width / div < 8)
    fail(ErrorCode::DepthTooLarge, "pyramid base would fall below 8x8");

  std::vector<Image> gaussians;
  gaussians.reserve(static_cast<std::size_t>(depth) + 1);
  gaussians.push_back(img);
  for (int n = 0; n < depth; ++n) gaussians.push_back(downsample(gaussians.back()));

  LaplacianPyramid pyr;
  pyr.levels.reserve(static_cast<std::size_t>(depth));
  for (int n = 0; n < depth; ++n)
    pyr.levels.push_back(subtract(gaussians[static_cast<std::size_t>(n)],
                                  upsample(gaussians[static_cast<std::size_t>(n) + 1])));
  pyr.base = gaussians.back();
  return pyr;
}

Image reconstruct(const LaplacianPyramid& pyr) {
  Image current = pyr.base;
  for (int n = pyr.depth() - 1; n >= 0; --n)
    current = add(upsample(current), pyr.levels[static_cast<std::size_t>(n)]);
  return current;
}

Image laplacian_depth1(const Image& img) {
  if (img.height < 16 || img.width < 16)
    fail(ErrorCode::ImageTooSmall, "laplacian_depth1 needs at least 16x16");
  require_even(img, "laplacian_depth1");
  return subtract(img, upsample(downsample(img)));
}

Image laplacian_depth1_adjoint(const Image& grid) {
  if (grid.height < 16 || grid.width < 16)
    fail(ErrorCode::ImageTooSmall, "laplacian_depth1_adjoint needs at least 16x16");
  require_even(grid, "laplacian_depth1_adjoint");
  return subtract(grid, downsample_adjoint(upsample_adjoint(grid)));
}

} // namespace gfl
