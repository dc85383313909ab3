#include "gfl/serial_ref.hpp"

#include <cmath>

namespace gfl::ref {

namespace {

const double kAnalysis1d[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

// Full 2D circular convolution with the outer product of a 5-tap kernel,
// optionally gain-scaled.
Image conv5x5_circular(const Image& in, double gain) {
  Image out(in.height, in.width, in.channels);
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.plane(c);
    double* dst = out.plane(c);
    for (int y = 0; y < in.height; ++y) {
      for (int x = 0; x < in.width; ++x) {
        double acc = 0.0;
        for (int ty = -2; ty <= 2; ++ty) {
          const int yy = (y + ty + in.height) % in.height;
          for (int tx = -2; tx <= 2; ++tx) {
            const int xx = (x + tx + in.width) % in.width;
            acc += kAnalysis1d[ty + 2] * kAnalysis1d[tx + 2] *
                   src[static_cast<std::size_t>(yy) * in.width + xx];
          }
        }
        dst[static_cast<std::size_t>(y) * in.width + x] = acc * gain;
      }
    }
  }
  return out;
}

} // namespace

Spectrum dft2_direct(const Image& img) {
  Spectrum spec(img.height, img.width, img.channels);
  const int m = img.height, n = img.width;
  for (int c = 0; c < img.channels; ++c) {
    const double* src = img.plane(c);
    for (int u = 0; u < m; ++u) {
      for (int v = 0; v < n; ++v) {
        double re = 0.0, im = 0.0;
        for (int x = 0; x < m; ++x) {
          for (int y = 0; y < n; ++y) {
            // phase reduced by the transform's own periodicity
            const double angle =
                -2.0 * M_PI *
                (static_cast<double>(static_cast<long long>(u) * x % m) / m +
                 static_cast<double>(static_cast<long long>(v) * y % n) / n);
            const double f = src[static_cast<std::size_t>(x) * n + y];
            re += f * std::cos(angle);
            im += f * std::sin(angle);
          }
        }
        spec.at(c, u, v) = {re, im};
      }
    }
  }
  return spec;
}

Image idft2_direct(const Spectrum& spec) {
  Image out(spec.height, spec.width, spec.channels);
  const int m = spec.height, n = spec.width;
  const double norm = 1.0 / (static_cast<double>(m) * n);
  for (int c = 0; c < spec.channels; ++c) {
    double* dst = out.plane(c);
    for (int x = 0; x < m; ++x) {
      for (int y = 0; y < n; ++y) {
        double re = 0.0;
        for (int u = 0; u < m; ++u) {
          for (int v = 0; v < n; ++v) {
            const double angle =
                2.0 * M_PI *
                (static_cast<double>(static_cast<long long>(u) * x % m) / m +
                 static_cast<double>(static_cast<long long>(v) * y % n) / n);
            const std::complex<double> F = spec.at(c, u, v);
            re += F.real() * std::cos(angle) - F.imag() * std::sin(angle);
          }
        }
        dst[static_cast<std::size_t>(x) * n + y] = re * norm;
      }
    }
  }
  return out;
}

Image downsample(const Image& grid) {
  if (grid.height % 2 != 0 || grid.width % 2 != 0)
    fail(ErrorCode::OddDimensions, "ref::downsample requires even dims");
  const Image blurred = conv5x5_circular(grid, 1.0);
  Image out(grid.height / 2, grid.width / 2, grid.channels);
  for (int c = 0; c < grid.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = blurred.at(c, 2 * y, 2 * x);
  return out;
}

Image upsample(const Image& grid) {
  Image expanded(grid.height * 2, grid.width * 2, grid.channels);
  for (int c = 0; c < grid.channels; ++c)
    for (int y = 0; y < grid.height; ++y)
      for (int x = 0; x < grid.width; ++x)
        expanded.at(c, 2 * y, 2 * x) = grid.at(c, y, x);
  return conv5x5_circular(expanded, 4.0);
}

Image laplacian_depth1(const Image& img) {
  const Image coarse = upsample(downsample(img));
  Image out = img;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] -= coarse.data[i];
  return out;
}

double mean_square_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    fail(ErrorCode::DimensionMismatch, "image shapes must match");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.data.size());
}

} // namespace gfl::ref
