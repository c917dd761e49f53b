#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "lienav/pipeline/pipeline.hpp"

namespace lienav::pipeline {

struct MonteCarloConfig {
  sim::SimConfig sim;
  PipelineOptions options;
  std::size_t trials = 25;
  std::uint64_t seed = 42;  // trial i uses seed + i
  /// 0 picks the hardware concurrency. The LIE_NAV_THREADS environment
  /// variable caps the value either way.
  std::size_t threads = 0;
  bool smooth = true;
  bool compute_nees = false;
  /// Largest tolerated fraction of failed trials.
  double max_failure_fraction = 0.05;
};

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string failure;
  double psi0 = 0.0;
  double heading_error = 0.0;  // psi0 minus true initial heading, rad
  ErrorAccumulator filtered;
  ErrorAccumulator smoothed;
  double nees_filtered = 0.0;  // mean over evaluated epochs
  double nees_smoothed = 0.0;
  estimation::FilterStats stats;
};

struct MonteCarloReport {
  std::size_t trials = 0;
  std::size_t failed = 0;
  ChannelArray filtered{};
  ChannelArray smoothed{};
  std::size_t epochs = 0;
  double nees_filtered = 0.0;  // mean over trials, 0 unless requested
  double nees_smoothed = 0.0;
  std::vector<TrialResult> per_trial;
};

/// Runs one simulated trial end to end. Library errors are captured in the
/// result rather than thrown.
TrialResult run_trial(const MonteCarloConfig& cfg, std::size_t index);

/// Trials run on a worker pool and are reduced in trial order, so the report
/// does not depend on the thread count. Throws kDivergence when more than
/// max_failure_fraction of the trials fail.
MonteCarloReport run_monte_carlo(const MonteCarloConfig& cfg,
                                 const std::function<void(const TrialResult&)>& progress = {});

/// Deterministic text report (no timing information).
void write_monte_carlo_report(const std::filesystem::path& path, const MonteCarloReport& report);

std::size_t resolve_thread_count(std::size_t requested);

}  // namespace lienav::pipeline
