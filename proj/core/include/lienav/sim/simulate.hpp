#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lienav/ins/types.hpp"
#include "lienav/sim/trajectory.hpp"

namespace lienav::sim {

using ins::GnssFix;

enum class SigmaFrame { kEcef, kNed };

/// IMU and GNSS error parameters in SI units; defaults follow the ADIS16495
/// class listing (Na 0.008 (m/s)/sqrt(h), Ng 0.09 deg/sqrt(h), Ba 3.2 ug,
/// Bg 0.8 deg/h, turn-on 500 ug and 10 deg/h, unit correlation rates,
/// GNSS 1/1/3 cm).
struct SimNoiseConfig {
  double na = 0.008 / 60.0;                                // m/s^2/sqrt(Hz)
  double ng = 0.09 * 0.017453292519943295 / 60.0;          // rad/s/sqrt(Hz)
  double ba = 3.2e-6 * 9.80665;                            // m/s^2/sqrt(s)
  double bg = 0.8 * 0.017453292519943295 / 3600.0;         // rad/s/sqrt(s)
  double beta_a = 500e-6 * 9.80665;                        // m/s^2
  double beta_g = 10.0 * 0.017453292519943295 / 3600.0;    // rad/s
  double tau_a = 1.0;                                      // 1/s, reversion rate
  double tau_g = 1.0;
  Vec3 sigma_xyz{0.01, 0.01, 0.03};                        // m
  SigmaFrame sigma_frame = SigmaFrame::kEcef;
  /// Draw each turn-on bias as beta * N(0, 1) instead of using beta itself.
  bool random_turn_on = false;
  std::uint64_t seed = 0;

  static SimNoiseConfig zero();
  ins::ImuNoiseParams filter_params() const;
};

/// b + tau (beta - b) dt + B sqrt(dt) w. Throws kUnstableStep if tau dt >= 1.
Vec3 ou_bias_step(const Vec3& b, double tau, const Vec3& beta, double B, double dt,
                  std::mt19937_64& rng);

struct CorruptedImu {
  std::vector<ImuSample> samples;
  std::vector<Vec3> bias_a;  // one per sample plus the state after the last
  std::vector<Vec3> bias_g;
};

CorruptedImu corrupt_imu(std::span<const ImuSample> ideal, const SimNoiseConfig& cfg,
                         std::mt19937_64& rng);

/// Fixes every rate/rate_hz epochs starting at the first, with lever arm and
/// N(0, sigma^2) noise. Throws kInvalidArgument unless rate_hz divides the
/// trajectory rate.
std::vector<GnssFix> gen_gnss(const ReferenceTrajectory& ref, const ins::LeverArm& lever,
                              const SimNoiseConfig& cfg, double rate_hz, std::mt19937_64& rng);

/// Adds a displacement of the given magnitude in a uniformly random direction
/// at each listed fix index; sigma fields are left alone.
std::vector<GnssFix> inject_outliers(std::span<const GnssFix> fixes,
                                     std::span<const std::size_t> epochs, double magnitude_m,
                                     std::mt19937_64& rng);

struct SimConfig {
  Profile profile = Profile::kCircular;
  ProfileParams params;
  double imu_rate = 200.0;
  double gnss_rate = 1.0;
  ins::LeverArm lever;
  SimNoiseConfig noise;
  std::vector<std::size_t> outlier_epochs;
  double outlier_magnitude = 1.0;
};

struct SimDataset {
  ReferenceTrajectory reference;
  std::vector<ImuSample> imu;
  std::vector<GnssFix> gnss;
  /// Reference states with the true biases, one per IMU sample.
  std::vector<GroupElement> truth;
};

/// Full generation from a single seed (cfg.noise.seed).
SimDataset simulate(const SimConfig& cfg);

}  // namespace lienav::sim
