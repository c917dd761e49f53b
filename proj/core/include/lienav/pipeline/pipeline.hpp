#pragma once

// The post-processing chain: static detection -> leveling -> heading
// alignment -> filter -> smoother.

#include <optional>
#include <span>
#include <vector>

#include "lienav/estimation/rts.hpp"
#include "lienav/pipeline/config.hpp"
#include "lienav/pipeline/csv_io.hpp"
#include "lienav/pipeline/rmse.hpp"

namespace lienav::pipeline {

struct AlignmentResult {
  alignment::StaticInterval stat;
  alignment::Leveling level;
  std::optional<alignment::HeadingPosterior> heading;  // empty for a fixed heading
  double psi0 = 0.0;
  std::size_t start_index = 0;  // first IMU sample after the static interval
  lie::ConcentratedGaussian initial;
};

struct PipelineResult {
  AlignmentResult alignment;
  std::vector<double> t;
  std::vector<lie::ConcentratedGaussian> filtered;
  std::vector<lie::ConcentratedGaussian> smoothed;  // empty when not requested
  estimation::FilterStats stats;
};

/// Errors from any stage are rethrown with the stage name prefixed.
AlignmentResult run_alignment(std::span<const ImuSample> imu, std::span<const GnssFix> gnss,
                              const PipelineOptions& options);
PipelineResult run_pipeline(std::span<const ImuSample> imu, std::span<const GnssFix> gnss,
                            const PipelineOptions& options, bool smooth = true);

struct RmseReport {
  ChannelArray filtered{};
  ChannelArray smoothed{};
  std::size_t epochs = 0;
  std::size_t trials = 1;
};

/// Accumulates errors of the epochs at or after filter start + skip_seconds
/// against truth matched by timestamp. Throws kMisaligned if an evaluated
/// epoch has no truth within 1e-6 s.
void accumulate_errors(const PipelineResult& result, std::span<const TimedState> truth,
                       double skip_seconds, ErrorAccumulator& filtered,
                       ErrorAccumulator& smoothed);

/// File-driven run: reads cfg.imu_path/gnss_path (and truth if set), writes
/// filtered.csv and smoothed.csv (and rmse_report.txt with truth) under
/// cfg.output_dir. Files written before a failure are removed.
std::optional<RmseReport> run_pipeline_files(const PipelineConfig& cfg, bool smooth = true);

void write_rmse_report(const std::filesystem::path& path, const RmseReport& report);

}  // namespace lienav::pipeline
