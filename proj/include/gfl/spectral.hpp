#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "gfl/image.hpp"

namespace gfl {

/// Per-channel complex frequency grid in unshifted layout (DC at (0,0)).
/// Forward transform is unnormalized; the inverse carries 1/(MN).
struct Spectrum {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<std::complex<double>> data;

  Spectrum() = default;
  Spectrum(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c) {}

  std::complex<double> at(int c, int u, int v) const {
    return data[(static_cast<std::size_t>(c) * height + u) * width + v];
  }
  std::complex<double>& at(int c, int u, int v) {
    return data[(static_cast<std::size_t>(c) * height + u) * width + v];
  }

  const std::complex<double>* plane(int c) const {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
  std::complex<double>* plane(int c) {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
};

/// Binary radial mask in unshifted layout. A bin passes when its Euclidean
/// distance from the centered DC bin is strictly greater than omega, which
/// keeps the mask point-symmetric: masked spectra of real images invert to
/// real images.
struct FrequencyMask {
  int height = 0;
  int width = 0;
  double omega = 0.0;
  std::vector<std::uint8_t> pass;

  bool passes(int u, int v) const {
    return pass[static_cast<std::size_t>(u) * width + v] != 0;
  }
  std::size_t count_passing() const;
};

/// Signed frequency of an unshifted bin index: the coordinate of the bin
/// relative to the centered DC bin after an fftshift.
double signed_frequency(int index, int size);

/// Forward 2D DFT per channel. Radix-2 FFT when both dims are powers of
/// two, direct summation otherwise; the two paths agree to ~1e-9.
Spectrum dft2(const Image& img);

/// Inverse transform with 1/(MN) normalization; returns the real part.
/// Throws AsymmetricSpectrum when the discarded imaginary residue exceeds
/// 1e-6, which signals a non-physical mask or a corrupted spectrum.
Image idft2(const Spectrum& spec);

FrequencyMask highpass_mask(int height, int width, double omega);

/// Spatial-domain high-pass: dft2, pointwise mask, idft2 real part.
/// Linear and self-adjoint; output is unclamped.
Image apply_highpass(const Image& img, const FrequencyMask& mask);

struct RadialPower {
  int radius = 0;
  double power = 0.0;
};

/// Mean |F(u,v)|^2 per integer radius bin (floor of the centered distance),
/// bins 0..min(M,N)/2. Input must be single-channel.
std::vector<RadialPower> radial_power_spectrum(const Image& img);

} // namespace gfl
