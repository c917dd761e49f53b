#pragma once

#include <Eigen/Core>

namespace lienav::ins {

using Vec3 = Eigen::Vector3d;

/// One IMU sample in body axes: angular rate (rad/s) and specific force (m/s^2).
struct ImuSample {
  double t = 0.0;
  Vec3 gyro = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

/// White-noise densities and bias diffusion of the IMU error model.
struct ImuNoiseParams {
  double sigma_g = 0.0;  // rad/s/sqrt(Hz)
  double sigma_a = 0.0;  // m/s^2/sqrt(Hz)
  double Bg = 0.0;       // rad/s/sqrt(s)
  double Ba = 0.0;       // m/s^2/sqrt(s)
};

/// GNSS position fix in ECEF with per-axis standard deviations.
struct GnssFix {
  double t = 0.0;
  Vec3 pos = Vec3::Zero();
  Vec3 sigma = Vec3::Ones();
};

/// IMU to antenna offset in body axes.
struct LeverArm {
  Vec3 l_b = Vec3::Zero();
};

}  // namespace lienav::ins
