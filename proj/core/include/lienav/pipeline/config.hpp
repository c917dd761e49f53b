#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "lienav/alignment/alignment.hpp"
#include "lienav/estimation/ekf.hpp"
#include "lienav/pipeline/units.hpp"
#include "lienav/sim/simulate.hpp"

namespace lienav::pipeline {

using Vec3 = Eigen::Vector3d;

/// Everything the align -> filter -> smooth chain needs besides data.
struct PipelineOptions {
  ins::ImuNoiseParams noise = sim::SimNoiseConfig{}.filter_params();
  ins::LeverArm lever;
  estimation::GateConfig gate;

  double static_window_s = 1.0;
  alignment::StaticThresholds static_thresholds;

  std::array<double, 3> guesses{-30.0 * alignment::kDeg, 0.0, 30.0 * alignment::kDeg};
  double sigma_psi = 60.0 * alignment::kDeg;
  double prior_mean = 0.0;
  double prefix_s = 120.0;
  bool allow_extrapolation = false;
  /// Skips heading alignment and starts from this heading.
  std::optional<double> fixed_heading;

  alignment::InitialSigma p0;
  /// RMSE evaluation starts this long after the filter start.
  double skip_seconds = 0.0;
};

struct PipelineConfig {
  std::filesystem::path imu_path;
  std::filesystem::path gnss_path;
  std::filesystem::path truth_path;
  std::filesystem::path output_dir = ".";

  PipelineOptions options;
  Unit gyro_unit = Unit::kRadPerSecond;
  Unit accel_unit = Unit::kMeterPerSecond2;
  Vec3 default_gnss_sigma{0.01, 0.01, 0.03};

  sim::SimConfig sim;
  std::size_t trials = 25;
  std::uint64_t seed = 42;
};

/// Parses flat `key = value [value ...] [unit]` text. Blank lines and lines
/// starting with '#' are ignored; a value without unit is taken as SI.
/// Throws kParse naming the line on unknown keys, bad numbers or units that do
/// not fit the key.
void apply_config_text(PipelineConfig& cfg, const std::string& text,
                       const std::string& source = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace lienav::pipeline
