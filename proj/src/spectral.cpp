#include "gfl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gfl {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Twiddle table for size n: w[k] = exp(-2*pi*i*k/n), k in [0, n/2).
std::vector<std::complex<double>> twiddle_table(int n) {
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n) / 2);
  for (int k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * M_PI * k / n;
    w[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
  return w;
}

// Iterative radix-2 Cooley-Tukey, in place. `table` holds the forward
// twiddles for the full size n; stage twiddles are strided lookups.
void fft_pow2(std::complex<double>* a, int n, bool inverse,
              const std::vector<std::complex<double>>& table) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int j = 0; j < len / 2; ++j) {
        std::complex<double> w = table[static_cast<std::size_t>(j) * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

// Direct evaluation of one 1D transform of length n. Phase arguments are
// reduced with an integer modulus before the trig call so they never grow
// with the index product.
void dft_direct(const std::complex<double>* in, std::complex<double>* out,
                int n, bool inverse) {
  const double sign = inverse ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (int t = 0; t < n; ++t) {
      const long long phase = static_cast<long long>(k) * t % n;
      const double angle = sign * 2.0 * M_PI * static_cast<double>(phase) / n;
      acc += in[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
}

// Row-column 2D transform of one channel plane, in place.
void transform2d(std::complex<double>* plane, int height, int width,
                 bool inverse) {
  const bool fast_rows = is_pow2(width);
  const bool fast_cols = is_pow2(height);
  const auto row_table = fast_rows ? twiddle_table(width)
                                   : std::vector<std::complex<double>>{};
  const auto col_table = fast_cols ? twiddle_table(height)
                                   : std::vector<std::complex<double>>{};

#pragma omp parallel for schedule(static) if (height >= 32)
  for (int y = 0; y < height; ++y) {
    std::complex<double>* row = plane + static_cast<std::size_t>(y) * width;
    if (fast_rows) {
      fft_pow2(row, width, inverse, row_table);
    } else {
      std::vector<std::complex<double>> tmp(static_cast<std::size_t>(width));
      dft_direct(row, tmp.data(), width, inverse);
      std::copy(tmp.begin(), tmp.end(), row);
    }
  }

#pragma omp parallel for schedule(static) if (width >= 32)
  for (int x = 0; x < width; ++x) {
    std::vector<std::complex<double>> col(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
      col[static_cast<std::size_t>(y)] = plane[static_cast<std::size_t>(y) * width + x];
    if (fast_cols) {
      fft_pow2(col.data(), height, inverse, col_table);
    } else {
      std::vector<std::complex<double>> tmp(static_cast<std::size_t>(height));
      dft_direct(col.data(), tmp.data(), height, inverse);
      col.swap(tmp);
    }
    for (int y = 0; y < height; ++y)
      plane[static_cast<std::size_t>(y) * width + x] = col[static_cast<std::size_t>(y)];
  }
}

} // namespace

std::size_t FrequencyMask::count_passing() const {
  return static_cast<std::size_t>(
      std::count(pass.begin(), pass.end(), std::uint8_t{1}));
}

double signed_frequency(int index, int size) {
  const int center = size / 2;
  return static_cast<double>((index + center) % size - center);
}

Spectrum dft2(const Image& img) {
  if (img.height < 8 || img.width < 8)
    fail(ErrorCode::ImageTooSmall, "dft2 needs at least 8x8");
  Spectrum spec(img.height, img.width, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    const double* src = img.plane(c);
    std::complex<double>* dst = spec.plane(c);
    const std::size_t n = static_cast<std::size_t>(img.height) * img.width;
    for (std::size_t i = 0; i < n; ++i) dst[i] = {src[i], 0.0};
    transform2d(dst, img.height, img.width, /*inverse=*/false);
  }
  return spec;
}

Image idft2(const Spectrum& spec) {
  Image out(spec.height, spec.width, spec.channels);
  const double norm = 1.0 / (static_cast<double>(spec.height) * spec.width);
  double max_residue = 0.0;
  std::vector<std::complex<double>> work;
  for (int c = 0; c < spec.channels; ++c) {
    work.assign(spec.plane(c),
                spec.plane(c) + static_cast<std::size_t>(spec.height) * spec.width);
    transform2d(work.data(), spec.height, spec.width, /*inverse=*/true);
    double* dst = out.plane(c);
    for (std::size_t i = 0; i < work.size(); ++i) {
      dst[i] = work[i].real() * norm;
      max_residue = std::max(max_residue, std::fabs(work[i].imag()) * norm);
    }
  }
  if (max_residue > 1e-6)
    fail(ErrorCode::AsymmetricSpectrum,
         "imaginary residue " + std::to_string(max_residue) +
             " after inversion; spectrum is not conjugate-symmetric");
  return out;
}

FrequencyMask highpass_mask(int height, int width, double omega) {
  if (omega < 0.0) fail(ErrorCode::InvalidConfig, "omega must be >= 0");
  FrequencyMask mask;
  mask.height = height;
  mask.width = width;
  mask.omega = omega;
  mask.pass.resize(static_cast<std::size_t>(height) * width);
  const double omega_sq = omega * omega;
  for (int u = 0; u < height; ++u) {
    const double fu = signed_frequency(u, height);
    for (int v = 0; v < width; ++v) {
      const double fv = signed_frequency(v, width);
      mask.pass[static_cast<std::size_t>(u) * width + v] =
          (fu * fu + fv * fv > omega_sq) ? 1 : 0;
    }
  }
  return mask;
}

Image apply_highpass(const Image& img, const FrequencyMask& mask) {
  if (mask.height != img.height || mask.width != img.width)
    fail(ErrorCode::DimensionMismatch, "mask dims must match image dims");
  Spectrum spec = dft2(img);
  for (int c = 0; c < spec.channels; ++c) {
    std::complex<double>* plane = spec.plane(c);
#pragma omp parallel for schedule(static) if (spec.height >= 64)
    for (int u = 0; u < spec.height; ++u) {
      for (int v = 0; v < spec.width; ++v) {
        const std::size_t i = static_cast<std::size_t>(u) * spec.width + v;
        if (!mask.pass[i]) plane[i] = {0.0, 0.0};
      }
    }
  }
  return idft2(spec);
}

std::vector<RadialPower> radial_power_spectrum(const Image& img) {
  if (img.channels != 1)
    fail(ErrorCode::DimensionMismatch,
         "radial_power_spectrum expects a single-channel image");
  const Spectrum spec = dft2(img);
  const int max_bin = std::min(img.height, img.width) / 2;
  std::vector<double> power(static_cast<std::size_t>(max_bin) + 1, 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(max_bin) + 1, 0);
  for (int u = 0; u < img.height; ++u) {
    const double fu = signed_frequency(u, img.height);
    for (int v = 0; v < img.width; ++v) {
      const double fv = signed_frequency(v, img.width);
      const int bin = static_cast<int>(std::floor(std::hypot(fu, fv)));
      if (bin > max_bin) continue;
      power[static_cast<std::size_t>(bin)] += std::norm(spec.at(0, u, v));
      ++count[static_cast<std::size_t>(bin)];
    }
  }
  std::vector<RadialPower> result;
  result.reserve(power.size());
  for (int bin = 0; bin <= max_bin; ++bin) {
    const std::size_t n = count[static_cast<std::size_t>(bin)];
    result.push_back({bin, n ? power[static_cast<std::size_t>(bin)] / n : 0.0});
  }
  return result;
}

} // namespace gfl
