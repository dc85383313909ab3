#include "gfl/harness.hpp"

#include <algorithm>
#include <cmath>

#include "gfl/csv.hpp"
#include "gfl/metrics.hpp"
#include "gfl/parallel.hpp"
#include "gfl/rng.hpp"

namespace gfl {

namespace {

struct LossEval {
  LossBreakdown breakdown; // baselines fill .total only
  Image gradient;
};

LossEval eval_loss(const Image& x, const Image& target, LossKind kind,
                   double epsilon, const FrequencyMask* mask) {
  LossEval ev;
  switch (kind) {
    case LossKind::Gfl: {
      GflParams params{epsilon, *mask};
      ev.gradient = gfl_gradient(x, target, params, &ev.breakdown);
      break;
    }
    case LossKind::Mse:
      ev.breakdown.total = mse_loss(x, target);
      ev.gradient = mse_gradient(x, target);
      break;
    case LossKind::Charbonnier:
      ev.breakdown.total = charbonnier_loss(x, target, epsilon);
      ev.gradient = charbonnier_gradient(x, target, epsilon);
      break;
    case LossKind::Edge:
      ev.breakdown.total = edge_loss(x, target);
      ev.gradient = edge_gradient(x, target);
      break;
  }
  return ev;
}

// Drives the pseudo-epoch schedule inside an optimization loop: advances
// the state when the step crosses an epoch boundary and rebuilds the mask
// only when the threshold actually changes.
class ScheduleDriver {
public:
  ScheduleDriver(const ExperimentConfig& config, int height, int width)
      : active_(config.loss == LossKind::Gfl), config_(config.schedule) {
    if (active_) {
      validate_schedule(config_);
      state_ = schedule_init(config_);
      steps_per_epoch_ = std::max(1, config.steps / config_.epochs);
    }
    mask_ = highpass_mask(height, width, 0.0);
    mask_.pass.assign(mask_.pass.size(), 0); // baselines: inert mask
    if (active_) mask_ = highpass_mask(height, width, config_.omega0);
  }

  // Called before each step; returns the threshold active for the step.
  double advance_to_step(int step) {
    if (!active_) return 0.0;
    const int epoch =
        std::min(config_.epochs, (step - 1) / steps_per_epoch_ + 1);
    while (state_.epoch < epoch) {
      std::optional<double> last;
      if (config_.mode == BandMode::Dynamic && state_.epoch >= 1)
        last = epoch_mean_; // mean loss over the epoch just finished
      const double omega = on_epoch(state_, config_, state_.epoch + 1, last);
      trace_.push_back({state_.epoch, omega, state_.frozen});
      if (omega != mask_.omega)
        mask_ = highpass_mask(mask_.height, mask_.width, omega);
      epoch_sum_ = 0.0;
      epoch_count_ = 0;
    }
    return state_.omega_prev;
  }

  void record_loss(double total) {
    if (!active_) return;
    epoch_sum_ += total;
    ++epoch_count_;
    epoch_mean_ = epoch_sum_ / epoch_count_;
  }

  const FrequencyMask& mask() const { return mask_; }
  const std::vector<TracePoint>& trace() const { return trace_; }

private:
  bool active_;
  ScheduleConfig config_;
  ScheduleState state_{};
  int steps_per_epoch_ = 1;
  FrequencyMask mask_;
  std::vector<TracePoint> trace_;
  double epoch_sum_ = 0.0;
  int epoch_count_ = 0;
  double epoch_mean_ = 0.0;
};

void check_finite_loss(const LossBreakdown& lb, const Image& grad) {
  if (!std::isfinite(lb.total) || !all_finite(grad))
    fail(ErrorCode::NonFiniteLoss,
         "loss or gradient diverged; lower the learning rate");
}

} // namespace

const char* task_name(Task task) {
  return task == Task::SuperResolution4x ? "sr4" : "denoise";
}

const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::Gfl: return "gfl";
    case LossKind::Mse: return "mse";
    case LossKind::Charbonnier: return "charbonnier";
    case LossKind::Edge: return "edge";
  }
  return "?";
}

std::optional<Task> parse_task(const std::string& name) {
  if (name == "sr4" || name == "sr") return Task::SuperResolution4x;
  if (name == "denoise" || name == "denoising") return Task::Denoising;
  return std::nullopt;
}

std::optional<LossKind> parse_loss(const std::string& name) {
  if (name == "gfl") return LossKind::Gfl;
  if (name == "mse") return LossKind::Mse;
  if (name == "charbonnier") return LossKind::Charbonnier;
  if (name == "edge") return LossKind::Edge;
  return std::nullopt;
}

DegradedPair make_pair(const Image& img, Task task, std::uint64_t seed) {
  validate_image(img);
  if (task == Task::SuperResolution4x)
    return {downscale_bicubic(img, kScaleFactor), img};
  return {add_gaussian_noise(img, kNoiseSigma, kNoiseMean, seed), img};
}

OptimizeResult optimize_direct(const DegradedPair& pair,
                               const ExperimentConfig& config) {
  if (config.steps < 1) fail(ErrorCode::InvalidConfig, "steps must be >= 1");
  if (!(config.learning_rate > 0.0))
    fail(ErrorCode::InvalidConfig, "learning_rate must be > 0");

  Image x = pair.degraded;
  if (config.task == Task::SuperResolution4x &&
      !pair.degraded.same_shape(pair.target))
    x = clamp01(upscale_bicubic(pair.degraded, kScaleFactor));
  if (!x.same_shape(pair.target))
    fail(ErrorCode::DimensionMismatch,
         "degraded input does not map onto the target size");

  ScheduleDriver schedule(config, x.height, x.width);
  OptimizeResult result;
  result.history.reserve(static_cast<std::size_t>(config.steps));

  for (int step = 1; step <= config.steps; ++step) {
    const double omega = schedule.advance_to_step(step);
    LossEval ev =
        eval_loss(x, pair.target, config.loss, config.epsilon, &schedule.mask());
    check_finite_loss(ev.breakdown, ev.gradient);
    schedule.record_loss(ev.breakdown.total);
    result.history.push_back(
        {step, ev.breakdown, omega, psnr(x, pair.target)});
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      x.data[i] = std::clamp(
          x.data[i] - config.learning_rate * ev.gradient.data[i], 0.0, 1.0);
    }
  }
  result.restored = std::move(x);
  result.schedule_trace = schedule.trace();
  return result;
}

Image convolve_kernel(const Image& input, const std::vector<double>& kernel,
                      int kernel_size) {
  if (kernel_size < 1 || kernel_size % 2 == 0)
    fail(ErrorCode::InvalidConfig, "kernel size must be odd and positive");
  if (kernel.size() != static_cast<std::size_t>(kernel_size) * kernel_size)
    fail(ErrorCode::InvalidConfig, "kernel buffer does not match its size");
  const int r = kernel_size / 2;
  const int h = input.height, w = input.width;
  Image out(h, w, input.channels);
  for (int c = 0; c < input.channels; ++c) {
    const double* src = input.plane(c);
    double* dst = out.plane(c);
#pragma omp parallel for schedule(static) if (h >= 64)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int a = 0; a < kernel_size; ++a) {
          const int yy = (y + a - r + h) % h;
          for (int b = 0; b < kernel_size; ++b) {
            const int xx = (x + b - r + w) % w;
            acc += kernel[static_cast<std::size_t>(a) * kernel_size + b] *
                   src[static_cast<std::size_t>(yy) * w + xx];
          }
        }
        dst[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
  }
  return out;
}

namespace {

// Correlation of the layer input with the loss gradient at the output:
// the chain rule for one shared circular convolution kernel.
std::vector<double> correlate_kernel(const Image& input, const Image& out_grad,
                                     int kernel_size) {
  const int r = kernel_size / 2;
  const int h = input.height, w = input.width;
  std::vector<double> grad(static_cast<std::size_t>(kernel_size) * kernel_size,
                           0.0);
  for (int a = 0; a < kernel_size; ++a) {
    for (int b = 0; b < kernel_size; ++b) {
      double acc = 0.0;
      for (int c = 0; c < input.channels; ++c) {
        const double* src = input.plane(c);
        const double* g = out_grad.plane(c);
        acc += detail::sum_rows(h, [&](int y) {
          const int yy = (y + a - r + h) % h;
          double row = 0.0;
          for (int x = 0; x < w; ++x) {
            const int xx = (x + b - r + w) % w;
            row += g[static_cast<std::size_t>(y) * w + x] *
                   src[static_cast<std::size_t>(yy) * w + xx];
          }
          return row;
        });
      }
      grad[static_cast<std::size_t>(a) * kernel_size + b] = acc;
    }
  }
  return grad;
}

} // namespace

std::vector<double> restorer_kernel_gradient(const Image& input,
                                             const Image& target,
                                             const std::vector<double>& kernel,
                                             int kernel_size, LossKind kind,
                                             double epsilon,
                                             const FrequencyMask* mask) {
  const Image out = convolve_kernel(input, kernel, kernel_size);
  const LossEval ev = eval_loss(out, target, kind, epsilon, mask);
  return correlate_kernel(input, ev.gradient, kernel_size);
}

TrainResult train_linear_restorer(const std::vector<DegradedPair>& corpus,
                                  const ExperimentConfig& config,
                                  int kernel_size) {
  if (corpus.empty()) fail(ErrorCode::InvalidConfig, "corpus is empty");
  if (kernel_size < 1 || kernel_size % 2 == 0 || kernel_size > 9)
    fail(ErrorCode::InvalidConfig, "kernel size must be odd, 1..9");
  if (config.steps < 1) fail(ErrorCode::InvalidConfig, "steps must be >= 1");
  for (const auto& pair : corpus) {
    if (!pair.degraded.same_shape(pair.target))
      fail(ErrorCode::DimensionMismatch,
           "restorer training needs same-size pairs");
    if (!pair.degraded.same_shape(corpus.front().degraded))
      fail(ErrorCode::DimensionMismatch, "corpus items must share one size");
  }

  const int n = static_cast<int>(corpus.size());
  const int held_out = std::max(1, n / 5);
  const int trained = std::max(1, n - held_out);

  std::vector<double> kernel(static_cast<std::size_t>(kernel_size) * kernel_size, 0.0);
  kernel[static_cast<std::size_t>(kernel_size / 2) * kernel_size +
         kernel_size / 2] = 1.0; // identity

  const Image& shape = corpus.front().degraded;
  ScheduleDriver schedule(config, shape.height, shape.width);

  for (int step = 1; step <= config.steps; ++step) {
    schedule.advance_to_step(step);
    const DegradedPair& item =
        corpus[static_cast<std::size_t>((step - 1) % trained)];
    const Image out = convolve_kernel(item.degraded, kernel, kernel_size);
    const LossEval ev =
        eval_loss(out, item.target, config.loss, config.epsilon, &schedule.mask());
    check_finite_loss(ev.breakdown, ev.gradient);
    schedule.record_loss(ev.breakdown.total);
    const std::vector<double> g =
        correlate_kernel(item.degraded, ev.gradient, kernel_size);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      kernel[i] -= config.learning_rate * g[i];
      if (!std::isfinite(kernel[i]))
        fail(ErrorCode::NonFiniteLoss, "kernel diverged");
    }
  }

  TrainResult result;
  result.kernel_size = kernel_size;
  result.kernel = kernel;
  result.schedule_trace = schedule.trace();
  for (int i = n - held_out; i < n; ++i) {
    const DegradedPair& item = corpus[static_cast<std::size_t>(i)];
    const Image restored =
        clamp01(convolve_kernel(item.degraded, kernel, kernel_size));
    ReportRow row;
    row.image = "item" + std::to_string(i);
    row.loss = loss_name(config.loss);
    row.psnr_in = psnr(item.degraded, item.target);
    row.psnr_out = psnr(restored, item.target);
    row.ssim_in = ssim(item.degraded, item.target);
    row.ssim_out = ssim(restored, item.target);
    result.report.push_back(std::move(row));
  }
  return result;
}

Image synthetic_smooth_image(int height, int width, int channels,
                             std::uint64_t seed, double lo, double hi) {
  if (hi < lo) std::swap(lo, hi);
  Xoshiro256pp rng(seed);
  Image img(height, width, channels);
  for (int c = 0; c < channels; ++c) {
    struct Wave { double fy, fx, phase, amp; };
    Wave waves[6];
    for (Wave& wv : waves) {
      wv.fy = static_cast<double>(rng.next() % 4);
      wv.fx = static_cast<double>(rng.next() % 4);
      wv.phase = 2.0 * M_PI * rng.uniform();
      wv.amp = 0.25 + rng.uniform();
    }
    double* plane = img.plane(c);
    double mn = 1e300, mx = -1e300;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double v = 0.0;
        for (const Wave& wv : waves)
          v += wv.amp * std::sin(2.0 * M_PI * (wv.fy * y / height +
                                               wv.fx * x / width) + wv.phase);
        plane[static_cast<std::size_t>(y) * width + x] = v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    }
    const std::size_t count = static_cast<std::size_t>(height) * width;
    if (mx - mn < 1e-12) {
      for (std::size_t i = 0; i < count; ++i) plane[i] = 0.5 * (lo + hi);
    } else {
      const double scale = (hi - lo) / (mx - mn);
      for (std::size_t i = 0; i < count; ++i)
        plane[i] = lo + (plane[i] - mn) * scale;
    }
  }
  return img;
}

std::string history_csv(const std::vector<StepRecord>& history) {
  std::string out = "step,ch_c,pi_c,theta_c,total,omega,psnr\n";
  for (const auto& rec : history) {
    out += std::to_string(rec.step);
    out += ',' + format_trimmed(rec.loss.ch_c);
    out += ',' + format_trimmed(rec.loss.pi_c);
    out += ',' + format_trimmed(rec.loss.theta_c);
    out += ',' + format_trimmed(rec.loss.total);
    out += ',' + format_trimmed(rec.omega);
    out += ',' + format_fixed(rec.psnr_value);
    out += '\n';
  }
  return out;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "image,loss,psnr_in,psnr_out,ssim_in,ssim_out\n";
  for (const auto& row : rows) {
    out += row.image + ',' + row.loss;
    out += ',' + format_fixed(row.psnr_in);
    out += ',' + format_fixed(row.psnr_out);
    out += ',' + format_fixed(row.ssim_in);
    out += ',' + format_fixed(row.ssim_out);
    out += '\n';
  }
  return out;
}

} // namespace gfl
