#pragma once

// CSV ingestion and export. Numbers are written with 12 significant digits.
//
// IMU:        t,gx,gy,gz,ax,ay,az        (a column may carry a unit: gx[deg/s])
// GNSS:       t,x,y,z[,sx,sy,sz]         (ECEF metres)
// Trajectory: t,lat,lon,alt,vn,ve,vd,roll,pitch,yaw,bax,bay,baz,bgx,bgy,bgz
//             lat/lon/roll/pitch/yaw in degrees, velocity in NED, biases SI;
//             filter outputs append 15 covariance diagonals in tangent order.

#include <filesystem>
#include <span>
#include <vector>

#include "lienav/lie/concentrated_gaussian.hpp"
#include "lienav/ins/types.hpp"
#include "lienav/pipeline/units.hpp"

namespace lienav::pipeline {

using ins::GnssFix;
using ins::ImuSample;
using lie::GroupElement;
using Vec3 = Eigen::Vector3d;

/// Throws kParse with file and line on malformed rows, non-increasing
/// timestamps or unit mismatches.
std::vector<ImuSample> parse_imu_csv(const std::filesystem::path& path,
                                     Unit gyro_unit = Unit::kRadPerSecond,
                                     Unit accel_unit = Unit::kMeterPerSecond2);
std::vector<GnssFix> parse_gnss_csv(const std::filesystem::path& path,
                                    const Vec3& default_sigma = Vec3(0.01, 0.01, 0.03));

void write_imu_csv(const std::filesystem::path& path, std::span<const ImuSample> imu);
void write_gnss_csv(const std::filesystem::path& path, std::span<const GnssFix> gnss);

struct TimedState {
  double t = 0.0;
  GroupElement x;
};

void write_truth_csv(const std::filesystem::path& path, std::span<const TimedState> truth);
std::vector<TimedState> parse_truth_csv(const std::filesystem::path& path);

void write_trajectory_csv(const std::filesystem::path& path, std::span<const double> t,
                          std::span<const lie::ConcentratedGaussian> states);

/// One row of the navigation columns for a state.
std::array<double, 16> nav_row(double t, const GroupElement& x);
GroupElement state_from_nav_row(const std::array<double, 16>& row);

}  // namespace lienav::pipeline
