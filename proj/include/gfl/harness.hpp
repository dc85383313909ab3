#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfl/image.hpp"
#include "gfl/loss.hpp"
#include "gfl/scheduler.hpp"

namespace gfl {

enum class Task { SuperResolution4x, Denoising };
enum class LossKind { Gfl, Mse, Charbonnier, Edge };

const char* task_name(Task task);
const char* loss_name(LossKind kind);
std::optional<Task> parse_task(const std::string& name);
std::optional<LossKind> parse_loss(const std::string& name);

// Degradation parameters for the two tasks.
constexpr double kNoiseSigma = 0.15;
constexpr double kNoiseMean = 0.0;
constexpr int kScaleFactor = 4;

struct ExperimentConfig {
  Task task = Task::Denoising;
  LossKind loss = LossKind::Gfl;
  ScheduleConfig schedule; // consulted only when loss == Gfl
  int steps = 1;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
};

struct DegradedPair {
  Image degraded;
  Image target;
};

/// Super-resolution: (bicubic x4 reduction, original). Denoising:
/// (seeded Gaussian noise sigma=0.15 mu=0, original).
DegradedPair make_pair(const Image& img, Task task, std::uint64_t seed);

struct StepRecord {
  int step = 0;
  LossBreakdown loss;   // baselines report their value in .total only
  double omega = 0.0;   // high-pass threshold active at this step
  double psnr_value = 0.0;
};

struct OptimizeResult {
  Image restored;
  std::vector<StepRecord> history;
  // Pseudo-epoch thresholds actually applied; matches trace() of the same
  // schedule config for static modes.
  std::vector<TracePoint> schedule_trace;
};

/// Plain gradient descent on the pixels of the restored image, initialized
/// from the degraded input (bicubically pre-upsampled for the SR task so
/// the pair is same-size). The schedule advances once per pseudo-epoch of
/// steps/epochs consecutive steps and swaps the high-pass mask between
/// them. Pixels are clamped to [0,1] after each step. Throws NonFiniteLoss
/// on divergence.
OptimizeResult optimize_direct(const DegradedPair& pair,
                               const ExperimentConfig& config);

struct ReportRow {
  std::string image;
  std::string loss;
  double psnr_in = 0.0;
  double psnr_out = 0.0;
  double ssim_in = 0.0;
  double ssim_out = 0.0;
};

struct TrainResult {
  int kernel_size = 0;
  std::vector<double> kernel; // row-major kernel_size x kernel_size
  std::vector<ReportRow> report; // per held-out image
  std::vector<TracePoint> schedule_trace;
};

/// Trains one shared k x k circular convolution (identity-initialized) by
/// SGD over the corpus, cycling item by item. Roughly the last fifth of
/// the corpus (at least one item) is held out for the report.
TrainResult train_linear_restorer(const std::vector<DegradedPair>& corpus,
                                  const ExperimentConfig& config,
                                  int kernel_size);

/// Shared per-channel circular convolution with a row-major k x k kernel.
Image convolve_kernel(const Image& input, const std::vector<double>& kernel,
                      int kernel_size);

/// d(loss)/d(kernel) for out = convolve_kernel(input, kernel): correlation
/// of the layer input with the loss gradient at the output. `mask` is
/// required when kind == Gfl.
std::vector<double> restorer_kernel_gradient(const Image& input,
                                             const Image& target,
                                             const std::vector<double>& kernel,
                                             int kernel_size, LossKind kind,
                                             double epsilon,
                                             const FrequencyMask* mask);

/// Seeded band-limited test image: a handful of low-frequency sinusoids,
/// affinely mapped into [lo, hi] per channel.
Image synthetic_smooth_image(int height, int width, int channels,
                             std::uint64_t seed, double lo = 0.4,
                             double hi = 0.6);

/// CSV with header step,ch_c,pi_c,theta_c,total,omega,psnr.
std::string history_csv(const std::vector<StepRecord>& history);

/// CSV with header image,loss,psnr_in,psnr_out,ssim_in,ssim_out.
std::string report_csv(const std::vector<ReportRow>& rows);

} // namespace gfl
