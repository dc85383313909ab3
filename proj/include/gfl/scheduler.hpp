#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfl/error.hpp"

namespace gfl {

enum class BandMode { Static, Dynamic };

/// Two readings of the static trigger. `Literal` advances a stage whenever
/// the epoch index is divisible by the stage count, so the band completes
/// after stages^2 epochs. `StageInterval` advances every floor(N/S) epochs,
/// spreading the stages evenly over the run.
enum class StaticTrigger { Literal, StageInterval };

struct ScheduleConfig {
  double omega0 = 0.0;       // initial threshold
  double omegaF = 0.0;       // final threshold
  int epochs = 1;            // N
  int stages = 1;            // S
  BandMode mode = BandMode::Static;
  std::optional<double> loss_threshold; // L_t, dynamic mode only
  StaticTrigger interpretation = StaticTrigger::Literal;
};

/// Throws InvalidConfig unless omega0 > omegaF >= 0, epochs >= 1,
/// stages >= 1, and loss_threshold is present exactly when mode is dynamic.
void validate_schedule(const ScheduleConfig& config);

struct ScheduleState {
  double omega_prev = 0.0;
  int epoch = 0;      // last epoch processed; 0 before the first
  bool frozen = false;
};

ScheduleState schedule_init(const ScheduleConfig& config);

/// Advances the state for `epoch` (must be state.epoch + 1) and returns the
/// threshold the epoch's high-pass filter should use. A stage fires when
/// (static and epoch divisible by the trigger period) or (dynamic and
/// last_epoch_gfl < loss_threshold). The threshold drops by
/// (omega0-omegaF)/stages per stage; once the remaining gap is smaller than
/// one step the threshold lands exactly on omegaF and freezes there.
double on_epoch(ScheduleState& state, const ScheduleConfig& config, int epoch,
                std::optional<double> last_epoch_gfl);

struct TracePoint {
  int epoch = 0;
  double omega = 0.0;
  bool frozen = false;
};

/// Offline expansion over all configured epochs. For dynamic mode,
/// gfl_values[i] is the loss value consulted by epoch i+1's check (the
/// entry for epoch 1 is never consulted: there is no previous epoch).
std::vector<TracePoint> trace(const ScheduleConfig& config,
                              const std::vector<double>* gfl_values = nullptr);

/// CSV with header epoch,omega,frozen.
std::string trace_csv(const std::vector<TracePoint>& points);

} // namespace gfl
