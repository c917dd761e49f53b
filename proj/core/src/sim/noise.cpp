#include <cmath>
#include <string>

#include "lienav/error.hpp"
#include "lienav/sim/simulate.hpp"

namespace lienav::sim {

namespace {

Vec3 gaussian3(std::normal_distribution<double>& nd, std::mt19937_64& rng) {
  const double x = nd(rng);
  const double y = nd(rng);
  const double z = nd(rng);
  return {x, y, z};
}

}  // namespace

SimNoiseConfig SimNoiseConfig::zero() {
  SimNoiseConfig c;
  c.na = c.ng = c.ba = c.bg = c.beta_a = c.beta_g = 0.0;
  c.sigma_xyz.setZero();
  return c;
}

ins::ImuNoiseParams SimNoiseConfig::filter_params() const {
  ins::ImuNoiseParams p;
  p.sigma_g = ng;
  p.sigma_a = na;
  p.Bg = bg;
  p.Ba = ba;
  return p;
}

Vec3 ou_bias_step(const Vec3& b, double tau, const Vec3& beta, double B, double dt,
                  std::mt19937_64& rng) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ou_bias_step: dt must be positive");
  if (tau * dt >= 1.0) {
    throw Error(ErrorKind::kUnstableStep, "ou_bias_step: tau*dt = " + std::to_string(tau * dt) +
                                              " makes the explicit step unstable");
  }
  std::normal_distribution<double> nd;
  return b + tau * (beta - b) * dt + B * std::sqrt(dt) * gaussian3(nd, rng);
}

CorruptedImu corrupt_imu(std::span<const ImuSample> ideal, const SimNoiseConfig& cfg,
                         std::mt19937_64& rng) {
  CorruptedImu out;
  out.samples.assign(ideal.begin(), ideal.end());
  const std::size_t n = ideal.size();
  out.bias_a.reserve(n + 1);
  out.bias_g.reserve(n + 1);
  if (n == 0) return out;

  const double dt = n > 1 ? (ideal[n - 1].t - ideal[0].t) / static_cast<double>(n - 1) : 0.005;
  const double root_fs = std::sqrt(1.0 / dt);
  const double sd_g = cfg.ng * root_fs;
  const double sd_a = cfg.na * root_fs;

  std::normal_distribution<double> nd;
  Vec3 beta_a = Vec3::Constant(cfg.beta_a);
  Vec3 beta_g = Vec3::Constant(cfg.beta_g);
  if (cfg.random_turn_on) {
    beta_a = cfg.beta_a * gaussian3(nd, rng);
    beta_g = cfg.beta_g * gaussian3(nd, rng);
  }
  Vec3 ba = beta_a;
  Vec3 bg = beta_g;
  for (std::size_t k = 0; k < n; ++k) {
    out.bias_a.push_back(ba);
    out.bias_g.push_back(bg);
    ImuSample& s = out.samples[k];
    const Vec3 wg = gaussian3(nd, rng);
    const Vec3 wa = gaussian3(nd, rng);
    if (sd_g > 0.0 || cfg.beta_g != 0.0 || cfg.bg != 0.0) s.gyro += bg + sd_g * wg;
    if (sd_a > 0.0 || cfg.beta_a != 0.0 || cfg.ba != 0.0) s.accel += ba + sd_a * wa;
    const double step = k + 1 < n ? ideal[k + 1].t - ideal[k].t : dt;
    ba = ou_bias_step(ba, cfg.tau_a, beta_a, cfg.ba, step, rng);
    bg = ou_bias_step(bg, cfg.tau_g, beta_g, cfg.bg, step, rng);
  }
  out.bias_a.push_back(ba);
  out.bias_g.push_back(bg);
  return out;
}

std::vector<GnssFix> gen_gnss(const ReferenceTrajectory& ref, const ins::LeverArm& lever,
                              const SimNoiseConfig& cfg, double rate_hz, std::mt19937_64& rng) {
  if (!(rate_hz > 0.0)) throw Error(ErrorKind::kInvalidArgument, "gen_gnss: rate must be positive");
  const double ratio = ref.rate / rate_hz;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "gen_gnss: GNSS rate must divide the IMU rate");
  }
  std::normal_distribution<double> nd;
  std::vector<GnssFix> out;
  out.reserve(ref.states.size() / stride + 1);
  for (std::size_t k = 0; k < ref.states.size(); k += stride) {
    const GroupElement& x = ref.states[k];
    GnssFix fix;
    fix.t = ref.t[k];
    const Vec3 w = gaussian3(nd, rng);
    if (cfg.sigma_frame == SigmaFrame::kEcef) {
      fix.sigma = cfg.sigma_xyz;
      fix.pos = x.pos() + x.rot() * lever.l_b + cfg.sigma_xyz.cwiseProduct(w);
    } else {
      const ins::Geodetic g = ins::geodetic_from_ecef(x.pos());
      const lie::Mat3 c = ins::ecef_from_ned(g.lat, g.lon);
      // The reported per-axis sigma is the diagonal of the rotated covariance.
      const lie::Mat3 cov = c * cfg.sigma_xyz.array().square().matrix().asDiagonal() * c.transpose();
      fix.sigma = cov.diagonal().cwiseSqrt();
      fix.pos = x.pos() + x.rot() * lever.l_b + c * cfg.sigma_xyz.cwiseProduct(w);
    }
    out.push_back(fix);
  }
  return out;
}

std::vector<GnssFix> inject_outliers(std::span<const GnssFix> fixes,
                                     std::span<const std::size_t> epochs, double magnitude_m,
                                     std::mt19937_64& rng) {
  std::vector<GnssFix> out(fixes.begin(), fixes.end());
  std::normal_distribution<double> nd;
  for (std::size_t k : epochs) {
    if (k >= out.size()) {
      throw Error(ErrorKind::kInvalidArgument, "inject_outliers: epoch " + std::to_string(k) +
                                                   " out of range");
    }
    Vec3 dir = gaussian3(nd, rng);
    while (dir.norm() < 1e-12) dir = gaussian3(nd, rng);
    out[k].pos += magnitude_m * dir.normalized();
  }
  return out;
}

}  // namespace lienav::sim
