#pragma once

#include "gfl/image.hpp"

namespace gfl {

/// 10*log10(1/mse) with peak 1.0, capped at 120 dB when mse < 1e-12.
double psnr(const Image& a, const Image& b);

/// Mean local structural similarity: 11x11 Gaussian window (sigma 1.5),
/// K1=0.01, K2=0.03, dynamic range 1.0, valid-region windows, channels
/// averaged. Needs dims >= 11.
double ssim(const Image& a, const Image& b);

} // namespace gfl
