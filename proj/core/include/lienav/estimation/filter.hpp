#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lienav/estimation/ekf.hpp"

namespace lienav::estimation {

struct FilterEpoch {
  double t = 0.0;
  ConcentratedGaussian predicted;
  ConcentratedGaussian updated;
  Tangent omega_dt = Tangent::Zero();
  Mat15 F = Mat15::Identity();
  std::optional<GateReport> gate;
};

struct FilterOptions {
  GateConfig gate;
  ins::LeverArm lever;
  bool keep_history = true;
  /// Fixes whose time lies this far before an epoch are still fused there;
  /// absorbs rounding in timestamps.
  double time_tolerance = 1e-6;
};

struct FilterStats {
  std::size_t fused = 0;
  std::size_t rejected = 0;
  std::size_t dropped = 0;
};

struct FilterRun {
  std::vector<FilterEpoch> history;  // empty unless keep_history
  ConcentratedGaussian final_state;
  FilterStats stats;
};

/// Called after each measurement update with the fix and gate outcome.
using UpdateObserver = std::function<void(const ins::GnssFix&, const GateReport&)>;

/// Runs the filter over imu[0..]. Epoch k sits at imu[k].t and is predicted
/// with imu[k-1]; epoch 0 carries `initial` unchanged. A fix is fused at the
/// first epoch with t >= fix.t when that epoch is less than half an IMU
/// period late; other fixes are dropped.
FilterRun run_filter(const ConcentratedGaussian& initial, std::span<const ImuSample> imu,
                     std::span<const ins::GnssFix> fixes, const ProcessModel& process,
                     const FilterOptions& options, const UpdateObserver& observer = {});

}  // namespace lienav::estimation
