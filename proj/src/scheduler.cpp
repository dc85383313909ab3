#include "gfl/scheduler.hpp"

#include "gfl/csv.hpp"

namespace gfl {

void validate_schedule(const ScheduleConfig& config) {
  if (!(config.omegaF >= 0.0))
    fail(ErrorCode::InvalidConfig, "omegaF must be >= 0");
  if (!(config.omega0 > config.omegaF))
    fail(ErrorCode::InvalidConfig, "omega0 must be greater than omegaF");
  if (config.epochs < 1) fail(ErrorCode::InvalidConfig, "epochs must be >= 1");
  if (config.stages < 1) fail(ErrorCode::InvalidConfig, "stages must be >= 1");
  if (config.mode == BandMode::Dynamic && !config.loss_threshold.has_value())
    fail(ErrorCode::InvalidConfig, "dynamic mode requires loss_threshold");
  if (config.mode == BandMode::Static && config.loss_threshold.has_value())
    fail(ErrorCode::InvalidConfig, "loss_threshold is only valid in dynamic mode");
}

ScheduleState schedule_init(const ScheduleConfig& config) {
  validate_schedule(config);
  return ScheduleState{config.omega0, 0, false};
}

double on_epoch(ScheduleState& state, const ScheduleConfig& config, int epoch,
                std::optional<double> last_epoch_gfl) {
  if (epoch != state.epoch + 1)
    fail(ErrorCode::EpochOutOfOrder,
         "expected epoch " + std::to_string(state.epoch + 1) + ", got " +
             std::to_string(epoch));
  state.epoch = epoch;
  if (state.frozen) return state.omega_prev;

  bool fire = false;
  if (config.mode == BandMode::Static) {
    const int period = config.interpretation == StaticTrigger::Literal
                           ? config.stages
                           : std::max(1, config.epochs / config.stages);
    fire = (epoch % period == 0);
  } else {
    fire = last_epoch_gfl.has_value() &&
           *last_epoch_gfl < *config.loss_threshold;
  }
  if (fire) {
    const double step = (config.omega0 - config.omegaF) / config.stages;
    state.omega_prev -= step;
    // Final-stage clamp: land exactly on omegaF, never below it.
    if (state.omega_prev - config.omegaF < step) {
      state.omega_prev = config.omegaF;
      state.frozen = true;
    }
  }
  return state.omega_prev;
}

std::vector<TracePoint> trace(const ScheduleConfig& config,
                              const std::vector<double>* gfl_values) {
  validate_schedule(config);
  if (config.mode == BandMode::Dynamic) {
    if (gfl_values == nullptr ||
        gfl_values->size() < static_cast<std::size_t>(config.epochs))
      fail(ErrorCode::InvalidConfig,
           "dynamic trace needs one loss value per epoch");
  }
  ScheduleState state = schedule_init(config);
  std::vector<TracePoint> points;
  points.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::optional<double> last;
    if (config.mode == BandMode::Dynamic && epoch > 1)
      last = (*gfl_values)[static_cast<std::size_t>(epoch) - 1];
    const double omega = on_epoch(state, config, epoch, last);
    points.push_back({epoch, omega, state.frozen});
  }
  return points;
}

std::string trace_csv(const std::vector<TracePoint>& points) {
  std::string out = "epoch,omega,frozen\n";
  for (const auto& p : points) {
    out += std::to_string(p.epoch);
    out += ',';
    out += format_trimmed(p.omega);
    out += ',';
    out += p.frozen ? "true" : "false";
    out += '\n';
  }
  return out;
}

} // namespace gfl
