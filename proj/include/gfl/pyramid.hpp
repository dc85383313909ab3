#pragma once

#include <vector>

#include "gfl/image.hpp"

namespace gfl {

/// Detail levels h_0..h_{N-1} with halving dimensions, plus the final
/// blurred base. reconstruct() inverts build_laplacian() exactly up to
/// floating-point rounding.
struct LaplacianPyramid {
  std::vector<Image> levels;
  Image base;

  int depth() const { return static_cast<int>(levels.size()); }
};

/// Separable 5-tap binomial blur ([1,4,6,4,1]/16 per axis) with circular
/// boundaries, then decimation to even indices. Dims must be even.
Image downsample(const Image& grid);

/// Zero-insertion to double size, then the gain-compensated blur
/// ([1,4,6,4,1]/8 per axis, circular). Preserves constants; satisfies
/// <u(x), y> = 4 <x, d(y)>.
Image upsample(const Image& grid);

/// Adjoint of downsample: zero-insert, then blur with the analysis kernel.
Image downsample_adjoint(const Image& grid);

/// Adjoint of upsample: blur with the synthesis kernel, then decimate.
Image upsample_adjoint(const Image& grid);

/// Blurred levels by repeated downsampling; detail level n is the level-n
/// grid minus the upsampled level below it. Requires dims divisible by
/// 2^depth with a base of at least 8x8.
LaplacianPyramid build_laplacian(const Image& img, int depth);

/// Exact inverse of build_laplacian: repeated upsample-and-add from the base.
Image reconstruct(const LaplacianPyramid& pyr);

/// The single detail level used by the loss: h_0 = I - u(d(I)). Linear,
/// annihilates constants. Dims must be even and at least 16.
Image laplacian_depth1(const Image& img);

/// Adjoint of laplacian_depth1 under the plain elementwise inner product.
Image laplacian_depth1_adjoint(const Image& grid);

} // namespace gfl
