#include "gfl/loss.hpp"

#include <cmath>

#include "gfl/parallel.hpp"
#include "gfl/pyramid.hpp"

namespace gfl {

namespace {

void require_same_shape(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    fail(ErrorCode::DimensionMismatch, "image shapes must match");
}

void require_loss_dims(const Image& a) {
  if (a.height < 16 || a.width < 16)
    fail(ErrorCode::ImageTooSmall, "composite loss needs at least 16x16");
  if (a.height % 2 != 0 || a.width % 2 != 0)
    fail(ErrorCode::OddDimensions, "composite loss needs even dims");
}

Image difference(const Image& a, const Image& b) {
  Image out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

double mean_square(const Image& g) {
  const int rows = g.height * g.channels;
  const double sum = detail::sum_rows(rows, [&](int r) {
    const double* p = g.data.data() + static_cast<std::size_t>(r) * g.width;
    double acc = 0.0;
    for (int x = 0; x < g.width; ++x) acc += p[x] * p[x];
    return acc;
  });
  return sum / static_cast<double>(g.size());
}

} // namespace

double charbonnier_penalty(double x, double epsilon) {
  if (epsilon <= 0.0) fail(ErrorCode::InvalidConfig, "epsilon must be > 0");
  return std::sqrt(x * x + epsilon * epsilon);
}

double ch_component(const Image& restored, const Image& reference,
                    double epsilon) {
  if (epsilon <= 0.0) fail(ErrorCode::InvalidConfig, "epsilon must be > 0");
  require_same_shape(restored, reference);
  return mean_square(difference(restored, reference)) + epsilon * epsilon;
}

double charbonnier_loss(const Image& restored, const Image& reference,
                        double epsilon) {
  return std::sqrt(ch_component(restored, reference, epsilon));
}

double pi_component(const Image& restored, const Image& reference) {
  require_same_shape(restored, reference);
  require_loss_dims(restored);
  return mean_square(laplacian_depth1(difference(restored, reference)));
}

double theta_component(const Image& restored, const Image& reference,
                       const FrequencyMask& mask) {
  require_same_shape(restored, reference);
  return mean_square(apply_highpass(difference(restored, reference), mask));
}

LossBreakdown gfl(const Image& restored, const Image& reference,
                  const GflParams& params) {
  if (params.epsilon <= 0.0)
    fail(ErrorCode::InvalidConfig, "epsilon must be > 0");
  require_same_shape(restored, reference);
  require_loss_dims(restored);
  if (params.mask.height != restored.height ||
      params.mask.width != restored.width)
    fail(ErrorCode::DimensionMismatch, "mask dims must match image dims");

  const Image diff = difference(restored, reference);
  LossBreakdown lb;
  lb.ch_c = mean_square(diff) + params.epsilon * params.epsilon;
  lb.pi_c = mean_square(laplacian_depth1(diff));
  lb.theta_c = mean_square(apply_highpass(diff, params.mask));
  lb.total = std::sqrt(lb.ch_c + lb.pi_c + lb.theta_c);
  return lb;
}

Image gfl_gradient(const Image& restored, const Image& reference,
                   const GflParams& params, LossBreakdown* breakdown) {
  if (params.epsilon <= 0.0)
    fail(ErrorCode::InvalidConfig, "epsilon must be > 0");
  require_same_shape(restored, reference);
  require_loss_dims(restored);
  if (params.mask.height != restored.height ||
      params.mask.width != restored.width)
    fail(ErrorCode::DimensionMismatch, "mask dims must match image dims");

  const Image diff = difference(restored, reference);
  const Image detail_residual = laplacian_depth1(diff);
  const Image highpass_residual = apply_highpass(diff, params.mask);

  const double ch = mean_square(diff) + params.epsilon * params.epsilon;
  const double pi = mean_square(detail_residual);
  const double theta = mean_square(highpass_residual);
  const double total = std::sqrt(ch + pi + theta);
  if (breakdown != nullptr) *breakdown = {ch, pi, theta, total};

  // d(total) = (residual + L^T residual_L + H residual_H) / (count * total);
  // the high-pass operator is self-adjoint, so H^T = H.
  const Image detail_pullback = laplacian_depth1_adjoint(detail_residual);
  const Image highpass_pullback = apply_highpass(highpass_residual, params.mask);

  Image grad = diff;
  const double scale = 1.0 / (static_cast<double>(diff.size()) * total);
  for (std::size_t i = 0; i < grad.data.size(); ++i) {
    grad.data[i] = (diff.data[i] + detail_pullback.data[i] +
                    highpass_pullback.data[i]) * scale;
  }
  return grad;
}

double mse_loss(const Image& restored, const Image& reference) {
  require_same_shape(restored, reference);
  return mean_square(difference(restored, reference));
}

double edge_loss(const Image& restored, const Image& reference) {
  return std::sqrt(pi_component(restored, reference));
}

Image mse_gradient(const Image& restored, const Image& reference) {
  require_same_shape(restored, reference);
  Image grad = difference(restored, reference);
  const double scale = 2.0 / static_cast<double>(grad.size());
  for (double& v : grad.data) v *= scale;
  return grad;
}

Image charbonnier_gradient(const Image& restored, const Image& reference,
                           double epsilon) {
  const double loss = charbonnier_loss(restored, reference, epsilon);
  Image grad = difference(restored, reference);
  const double scale = 1.0 / (static_cast<double>(grad.size()) * loss);
  for (double& v : grad.data) v *= scale;
  return grad;
}

Image edge_gradient(const Image& restored, const Image& reference) {
  require_same_shape(restored, reference);
  require_loss_dims(restored);
  const Image residual = laplacian_depth1(difference(restored, reference));
  const double pi = mean_square(residual);
  Image grad(restored.height, restored.width, restored.channels);
  if (pi <= 0.0) return grad; // flat at the (non-smooth) minimum
  const Image pullback = laplacian_depth1_adjoint(residual);
  const double scale =
      1.0 / (static_cast<double>(grad.size()) * std::sqrt(pi));
  for (std::size_t i = 0; i < grad.data.size(); ++i)
    grad.data[i] = pullback.data[i] * scale;
  return grad;
}

} // namespace gfl
