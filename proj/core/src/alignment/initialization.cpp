#include <cmath>
#include <string>

#include "lienav/alignment/alignment.hpp"
#include "lienav/error.hpp"
#include "lienav/ins/earth.hpp"

namespace lienav::alignment {

Leveling leveling(const Vec3& f, double g0) {
  const double norm = f.norm();
  if (!f.allFinite() || std::abs(norm - g0) > 0.2 * g0) {
    throw Error(ErrorKind::kNotStationary, "leveling: mean specific force " + std::to_string(norm) +
                                               " m/s^2 is not close to gravity");
  }
  Leveling out;
  out.theta0 = std::atan(f.x() / std::hypot(f.y(), f.z()));
  out.phi0 = std::atan2(-f.y(), -f.z());
  return out;
}

lie::Mat15 InitialSigma::covariance() const {
  lie::Tangent sd;
  sd << attitude, Vec3::Constant(velocity), Vec3::Constant(position), Vec3::Constant(accel_bias),
      Vec3::Constant(gyro_bias);
  return sd.array().square().matrix().asDiagonal();
}

ConcentratedGaussian init_state(const StaticInterval& stat, std::span<const GnssFix> gnss,
                                double psi0, const ins::LeverArm& lever,
                                const InitialSigma& sigma) {
  constexpr double kTimeTolerance = 1e-6;
  Vec3 sum = Vec3::Zero();
  std::size_t count = 0;
  for (const GnssFix& fix : gnss) {
    if (fix.t >= stat.t_start - kTimeTolerance && fix.t <= stat.t_end + kTimeTolerance) {
      sum += fix.pos;
      ++count;
    }
  }
  if (count < 3) {
    throw Error(ErrorKind::kInsufficientFixes, "init_state: " + std::to_string(count) +
                                                   " GNSS fixes inside the static interval, need 3");
  }
  const Vec3 antenna = sum / static_cast<double>(count);
  const ins::Geodetic geo = ins::geodetic_from_ecef(antenna);
  const Leveling lev = leveling(stat.mean_accel);
  const lie::Mat3 c = ins::attitude_ecef(Vec3(lev.phi0, lev.theta0, psi0), geo.lat, geo.lon);

  // The stationary gyro mean is bias plus the sensed Earth rate.
  lie::Vec6 bias = lie::Vec6::Zero();
  bias.tail<3>() = stat.mean_gyro - c.transpose() * ins::earth_rate_ecef();
  ConcentratedGaussian out;
  out.mean = lie::GroupElement(c, Vec3::Zero(), antenna - c * lever.l_b, bias);
  out.cov = sigma.covariance();
  return out;
}

}  // namespace lienav::alignment
