#pragma once

#include "gfl/image.hpp"
#include "gfl/spectral.hpp"

namespace gfl {

/// Parameters of the composite loss. The mask realizes the scheduled
/// high-pass term and is swapped only between epochs; epsilon keeps the
/// square root away from zero.
struct GflParams {
  double epsilon = 1e-3;
  FrequencyMask mask;
};

/// The three squared components and their composition
/// total = sqrt(ch_c + pi_c + theta_c). All norms are per-element means,
/// so values are comparable across resolutions.
struct LossBreakdown {
  double ch_c = 0.0;
  double pi_c = 0.0;
  double theta_c = 0.0;
  double total = 0.0;
};

/// rho(x) = sqrt(x^2 + epsilon^2); smooth, even, bounded below by epsilon.
double charbonnier_penalty(double x, double epsilon);

/// sqrt(mean((a-b)^2) + epsilon^2).
double charbonnier_loss(const Image& restored, const Image& reference,
                        double epsilon);

/// mean((a-b)^2) + epsilon^2; equals charbonnier_loss squared.
double ch_component(const Image& restored, const Image& reference,
                    double epsilon);

/// mean squared difference of the depth-1 detail levels.
double pi_component(const Image& restored, const Image& reference);

/// mean squared difference of the high-pass-filtered images.
double theta_component(const Image& restored, const Image& reference,
                       const FrequencyMask& mask);

LossBreakdown gfl(const Image& restored, const Image& reference,
                  const GflParams& params);

/// Analytic d(total)/d(restored): the component residuals pulled back
/// through the adjoint operators and divided by count * total. Matches
/// central finite differences to ~1e-6 relative. When `breakdown` is given
/// it receives the loss evaluated at the same point.
Image gfl_gradient(const Image& restored, const Image& reference,
                   const GflParams& params,
                   LossBreakdown* breakdown = nullptr);

double mse_loss(const Image& restored, const Image& reference);

/// sqrt of the detail-level component; the edge-only baseline.
double edge_loss(const Image& restored, const Image& reference);

// Gradients of the baseline losses, used by the optimization harness.
Image mse_gradient(const Image& restored, const Image& reference);
Image charbonnier_gradient(const Image& restored, const Image& reference,
                           double epsilon);
Image edge_gradient(const Image& restored, const Image& reference);

} // namespace gfl
