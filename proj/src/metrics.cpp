#include "gfl/metrics.hpp"

#include <array>
#include <cmath>

#include "gfl/loss.hpp"
#include "gfl/parallel.hpp"

namespace gfl {

namespace {

constexpr int kWindow = 11;
constexpr int kRadius = kWindow / 2;
constexpr double kC1 = 0.01 * 0.01; // (K1 * L)^2, L = 1
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  const double sigma = 1.5;
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kRadius;
    w[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return w;
}

// SSIM over one channel plane, valid windows only.
double ssim_plane(const double* a, const double* b, int height, int width) {
  static const std::array<double, kWindow> win = gaussian_window();
  const int oh = height - kWindow + 1;
  const int ow = width - kWindow + 1;
  const double sum = detail::sum_rows(oh, [&](int oy) {
    double row_acc = 0.0;
    for (int ox = 0; ox < ow; ++ox) {
      double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
      for (int wy = 0; wy < kWindow; ++wy) {
        const double* ra = a + static_cast<std::size_t>(oy + wy) * width + ox;
        const double* rb = b + static_cast<std::size_t>(oy + wy) * width + ox;
        double la = 0.0, lb = 0.0, laa = 0.0, lbb = 0.0, lab = 0.0;
        for (int wx = 0; wx < kWindow; ++wx) {
          const double wv = win[static_cast<std::size_t>(wx)];
          la += wv * ra[wx];
          lb += wv * rb[wx];
          laa += wv * ra[wx] * ra[wx];
          lbb += wv * rb[wx] * rb[wx];
          lab += wv * ra[wx] * rb[wx];
        }
        const double wy_v = win[static_cast<std::size_t>(wy)];
        mu_a += wy_v * la;
        mu_b += wy_v * lb;
        aa += wy_v * laa;
        bb += wy_v * lbb;
        ab += wy_v * lab;
      }
      const double var_a = aa - mu_a * mu_a;
      const double var_b = bb - mu_b * mu_b;
      const double cov = ab - mu_a * mu_b;
      const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
      const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
      row_acc += num / den;
    }
    return row_acc;
  });
  return sum / (static_cast<double>(oh) * ow);
}

} // namespace

double psnr(const Image& a, const Image& b) {
  const double mse = mse_loss(a, b);
  if (mse < 1e-12) return 120.0;
  return -10.0 * std::log10(mse);
}

double ssim(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    fail(ErrorCode::DimensionMismatch, "image shapes must match");
  if (a.height < kWindow || a.width < kWindow)
    fail(ErrorCode::ImageTooSmall, "ssim needs at least 11x11");
  double acc = 0.0;
  for (int c = 0; c < a.channels; ++c)
    acc += ssim_plane(a.plane(c), b.plane(c), a.height, a.width);
  return acc / a.channels;
}

} // namespace gfl
