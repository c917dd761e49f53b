#include "lienav/estimation/filter.hpp"

#include <string>

#include "lienav/error.hpp"

namespace lienav::estimation {

FilterRun run_filter(const ConcentratedGaussian& initial, std::span<const ImuSample> imu,
                     std::span<const ins::GnssFix> fixes, const ProcessModel& process,
                     const FilterOptions& options, const UpdateObserver& observer) {
  if (imu.empty()) throw Error(ErrorKind::kData, "run_filter: empty IMU stream");

  FilterRun run;
  if (options.keep_history) run.history.reserve(imu.size());

  std::size_t next_fix = 0;
  ConcentratedGaussian state = initial;
  for (std::size_t k = 0; k < imu.size(); ++k) {
    FilterEpoch epoch;
    epoch.t = imu[k].t;
    double period;
    if (k == 0) {
      period = imu.size() > 1 ? imu[1].t - imu[0].t : 0.0;
    } else {
      period = imu[k].t - imu[k - 1].t;
      if (!(period > 0.0)) {
        throw Error(ErrorKind::kData, "run_filter: IMU timestamps not increasing at t=" +
                                          std::to_string(imu[k].t));
      }
      PredictResult pred = ekf_predict(state, imu[k - 1], period, process);
      state = std::move(pred.state);
      epoch.omega_dt = pred.omega_dt;
      epoch.F = pred.F;
    }
    epoch.predicted = state;

    // Fixes that fall between the previous epoch and this one are fused here
    // if close enough; at most one fix is fused per epoch.
    while (next_fix < fixes.size() && fixes[next_fix].t - options.time_tolerance <= epoch.t) {
      const ins::GnssFix& fix = fixes[next_fix++];
      const double lag = epoch.t - fix.t;
      const bool fresh = lag < 0.5 * period || (k == 0 && lag <= options.time_tolerance);
      const bool pending = next_fix < fixes.size() &&
                           fixes[next_fix].t - options.time_tolerance <= epoch.t;
      if (!fresh || pending || epoch.gate) {
        ++run.stats.dropped;
        continue;
      }
      UpdateResult upd = ekf_update(state, fix, options.lever, options.gate);
      const bool applied = options.gate.mode != GateMode::kHard || upd.gate.accepted;
      if (applied) {
        state = std::move(upd.state);
        ++run.stats.fused;
      } else {
        ++run.stats.rejected;
      }
      if (observer) observer(fix, upd.gate);
      epoch.gate = upd.gate;
    }
    if (!state.mean.pos().allFinite() || !state.mean.rot().allFinite()) {
      throw Error(ErrorKind::kDivergence, "run_filter: non-finite state at t=" + std::to_string(epoch.t));
    }
    epoch.updated = state;
    if (options.keep_history) run.history.push_back(std::move(epoch));
  }
  run.stats.dropped += fixes.size() - next_fix;
  run.final_state = state;
  return run;
}

}  // namespace lienav::estimation
