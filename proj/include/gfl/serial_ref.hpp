#pragma once

#include "gfl/image.hpp"
#include "gfl/spectral.hpp"

// Deliberately simple serial implementations of the heavy kernels, kept as
// independent oracles for the optimized OpenMP paths and as the baseline
// side of the benchmark. Different algorithms on purpose: the transform is
// the literal double sum, the pyramid filters use the full 2D kernel
// instead of separable passes.
namespace gfl::ref {

/// Literal evaluation of the forward transform, O(M^2 N^2).
Spectrum dft2_direct(const Image& img);

/// Literal inverse with 1/(MN) normalization; returns the real part.
Image idft2_direct(const Spectrum& spec);

/// Circular convolution with the full 5x5 analysis kernel, then decimation.
Image downsample(const Image& grid);

/// Zero-insertion, then circular convolution with the full 5x5 synthesis
/// kernel (gain 4).
Image upsample(const Image& grid);

/// h_0 = I - u(d(I)) built from the reference resampling ops.
Image laplacian_depth1(const Image& img);

/// Serial mean of (a-b)^2 over all samples.
double mean_square_diff(const Image& a, const Image& b);

} // namespace gfl::ref
