#pragma once

// Initialization: static-interval detection, leveling, initial state and
// likelihood-based heading alignment.

#include <array>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>

#include "lienav/estimation/ekf.hpp"
#include "lienav/ins/types.hpp"

namespace lienav::alignment {

using estimation::ConcentratedGaussian;
using ins::GnssFix;
using ins::ImuSample;
using Vec3 = Eigen::Vector3d;

inline constexpr double kDeg = std::numbers::pi / 180.0;

struct StaticInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  Vec3 mean_accel = Vec3::Zero();
  Vec3 mean_gyro = Vec3::Zero();
  std::size_t sample_count = 0;
  std::size_t first = 0;  // index range [first, last] in the source stream
  std::size_t last = 0;
};

struct StaticThresholds {
  double gyro_std = 0.02;         // rad/s, std of |gyro| inside a window
  double accel_std = 0.15;        // m/s^2, std of |accel| inside a window
  double accel_mean_drift = 0.05; // m/s^2, window mean vs. first window mean
  double gyro_mean_drift = 0.01;  // rad/s, same for gyro
  std::size_t min_samples = 2000;
};

/// Longest stationary prefix of the stream, tested on consecutive windows of
/// window_s seconds. The last passing window is discarded as a guard against
/// slow motion onset. Throws kAlignmentImpossible when no qualifying prefix of
/// at least min_samples exists.
StaticInterval detect_static(std::span<const ImuSample> imu, double window_s = 1.0,
                             const StaticThresholds& thresholds = {});

struct Leveling {
  double theta0 = 0.0;  // pitch, rad
  double phi0 = 0.0;    // roll, rad
};

/// Roll and pitch from the mean specific force. Throws kNotStationary when
/// |mean_accel| differs from g0 by more than 20%.
Leveling leveling(const Vec3& mean_accel, double g0 = 9.80665);

/// 1-sigma initial uncertainty in tangent ordering.
struct InitialSigma {
  Vec3 attitude{1.0 / 3.0 * kDeg, 1.0 / 3.0 * kDeg, 5.0 / 3.0 * kDeg};
  double velocity = 0.001 / 3.0;                    // m/s
  double position = 0.1 / 3.0;                      // m
  double accel_bias = 1e-3 * 9.80665 / 3.0;         // m/s^2
  double gyro_bias = 15.0 / 3.0 * kDeg / 3600.0;    // rad/s (5 deg/h)

  lie::Mat15 covariance() const;
};

/// Initial distribution from the static interval and a heading guess. The
/// position is the lever-arm corrected mean of fixes inside the interval; the
/// gyro bias is the stationary gyro mean less the Earth rate seen through the
/// initial attitude.
ConcentratedGaussian init_state(const StaticInterval& stat, std::span<const GnssFix> gnss,
                                double psi0, const ins::LeverArm& lever = {},
                                const InitialSigma& sigma = {});

/// Inputs shared by the heading-candidate filter runs. `imu` starts at the
/// filter start (end of the static interval).
struct HeadingProblem {
  std::span<const ImuSample> imu;
  std::span<const GnssFix> gnss;
  StaticInterval stat;
  ins::ImuNoiseParams noise;
  ins::LeverArm lever;
  InitialSigma p0;
  double prefix_s = 120.0;
  double sigma_psi = 60.0 * kDeg;
  double prior_mean = 0.0;
};

/// Negative log posterior of psi0 accumulated over an ungated filter run;
/// +inf if the run diverges.
double heading_log_likelihood(const HeadingProblem& problem, double psi0);

struct HeadingPosterior {
  double psi_star = 0.0;
  double curvature = 0.0;  // m1
  std::array<double, 3> psi{};
  std::array<double, 3> cost{};
  double sigma_psi_star = std::numeric_limits<double>::infinity();
};

/// Exact parabola through three (psi, cost) samples. Throws kNonConvexFit if
/// the curvature is not positive or, unless allowed, the minimizer falls
/// outside the sampled range.
HeadingPosterior fit_parabola(const std::array<double, 3>& psi, const std::array<double, 3>& cost,
                              bool allow_extrapolation = false);

HeadingPosterior heading_align(const HeadingProblem& problem,
                               const std::array<double, 3>& guesses = {-30.0 * kDeg, 0.0, 30.0 * kDeg},
                               bool allow_extrapolation = false);

}  // namespace lienav::alignment
