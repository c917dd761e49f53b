#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lienav/error.hpp"
#include "lienav/ins/model.hpp"
#include "lienav/sim/simulate.hpp"
#include "oracles.hpp"

using namespace lienav;
using namespace lienav::sim;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace {

constexpr double kPi = std::numbers::pi;

// Local tangent-plane NED coordinates about the profile origin.
Vec3 local_ned(const ReferenceTrajectory& ref, const Vec3& p) {
  const Vec3 p0 = ins::ecef_from_geodetic(ref.params.origin);
  return ins::ecef_from_ned(ref.params.origin.lat, ref.params.origin.lon).transpose() * (p - p0);
}

std::size_t index_at(const ReferenceTrajectory& ref, double t) {
  return static_cast<std::size_t>(std::llround(t * ref.rate));
}

// Circumcentre of three planar points.
Eigen::Vector2d circumcentre(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  Eigen::Matrix2d m;
  m << 2.0 * (b - a).transpose(), 2.0 * (c - a).transpose();
  const Eigen::Vector2d r(b.squaredNorm() - a.squaredNorm(), c.squaredNorm() - a.squaredNorm());
  return m.partialPivLu().solve(r);
}

std::vector<ImuSample> stationary_stream(std::size_t n, double rate) {
  std::vector<ImuSample> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k].t = static_cast<double>(k) / rate;
  return s;
}

}  // namespace

TEST(Reference, CircleHasConstantRadius) {
  const ReferenceTrajectory ref = make_reference(Profile::kCircular);
  const double t0 = ref.params.static_s;
  auto xy = [&](double tf) {
    return Eigen::Vector2d(local_ned(ref, ref.states[index_at(ref, t0 + tf)].pos()).head<2>());
  };
  const Eigen::Vector2d centre = circumcentre(xy(10.0), xy(40.0), xy(90.0));
  double worst = 0.0;
  for (std::size_t k = index_at(ref, t0); k < ref.states.size(); ++k) {
    const Vec3 p = local_ned(ref, ref.states[k].pos());
    worst = std::max(worst, std::abs((p.head<2>() - centre).norm() - 100.0));
    EXPECT_NEAR(p.z(), 0.0, 1e-9);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Reference, StationaryPrefixIsAtRest) {
  const ReferenceTrajectory ref = make_reference(Profile::kRectangular);
  const Mat3 c0 = ref.states[0].rot();
  const Vec3 p0 = ref.states[0].pos();
  for (std::size_t k = 0; k + 1 < index_at(ref, ref.params.static_s); ++k) {
    EXPECT_EQ(ref.states[k].vel(), Vec3::Zero());
    EXPECT_LT((ref.states[k].rot() - c0).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(ref.states[k].pos(), p0);
  }
}

TEST(Reference, HelixClimbRate) {
  const ReferenceTrajectory ref = make_reference(Profile::kHelicoidal);
  const double t0 = ref.params.static_s + ref.params.ramp_s;
  const double up0 = -local_ned(ref, ref.states[index_at(ref, t0)].pos()).z();
  const double up1 = -local_ned(ref, ref.states[index_at(ref, t0 + 60.0)].pos()).z();
  EXPECT_NEAR(up1 - up0, 60.0, 0.01);
}

TEST(Reference, AllProfilesHaveStartingHeading) {
  for (Profile p : {Profile::kHelicoidal, Profile::kRectangular, Profile::kCircular}) {
    ProfileParams params;
    params.heading0 = 0.7;
    const ReferenceTrajectory ref = make_reference(p, params);
    const Vec3 euler = ins::euler_from_attitude_ecef(ref.states[0].rot(), ref.states[0].pos());
    EXPECT_NEAR(euler.z(), 0.7, 1e-9) << to_string(p);
    EXPECT_NEAR(ref.t.back(), params.static_s + params.flight_s, 1e-9);
  }
}

TEST(Reference, RejectsInvalidParameters) {
  ProfileParams short_flight;
  short_flight.static_s = 10.0;
  short_flight.flight_s = 20.0;
  EXPECT_THROW(make_reference(Profile::kCircular, short_flight), Error);
  EXPECT_THROW(make_reference(Profile::kCircular, {}, 20.0), Error);
  ProfileParams bad;
  bad.radius = 0.0;
  EXPECT_THROW(make_reference(Profile::kCircular, bad), Error);
  EXPECT_THROW(parse_profile("figure-eight"), Error);
  EXPECT_EQ(parse_profile("helicoidal"), Profile::kHelicoidal);
}

TEST(InverseMechanization, StationarySensesEarthRateAndGravity) {
  const ReferenceTrajectory ref = make_reference(Profile::kCircular);
  const std::vector<ImuSample> imu = inverse_mechanization(ref);
  ASSERT_EQ(imu.size() + 1, ref.states.size());
  for (std::size_t k = 0; k + 1 < index_at(ref, ref.params.static_s); k += 97) {
    const Mat3 ct = ref.states[k].rot().transpose();
    EXPECT_LT((imu[k].gyro - ct * ins::earth_rate_ecef()).norm(), 1e-9);
    EXPECT_LT((imu[k].accel + ct * ins::gravity_ecef(ref.states[k].pos())).norm(), 1e-9);
  }
}

TEST(InverseMechanization, ForwardPropagationReproducesReference) {
  for (Profile p : {Profile::kHelicoidal, Profile::kRectangular, Profile::kCircular}) {
    ProfileParams params;
    params.static_s = 5.0;
    params.flight_s = 60.0;
    const ReferenceTrajectory ref = make_reference(p, params);
    const std::vector<ImuSample> imu = inverse_mechanization(ref);
    lie::GroupElement x = ref.states[0];
    double worst = 0.0;
    for (std::size_t k = 0; k < imu.size(); ++k) {
      x = ins::propagate(x, imu[k], ref.t[k + 1] - ref.t[k]);
      worst = std::max(worst, (x.pos() - ref.states[k + 1].pos()).norm());
    }
    EXPECT_LT(worst, 1e-4) << to_string(p);
  }
}

TEST(InverseMechanization, SteadyTurnRate) {
  const ReferenceTrajectory ref = make_reference(Profile::kCircular);
  const std::vector<ImuSample> imu = inverse_mechanization(ref);
  const double expected = ref.params.speed / ref.params.radius;
  const std::size_t first = index_at(ref, ref.params.static_s + ref.params.ramp_s + 1.0);
  for (std::size_t k = first; k < imu.size(); k += 101) {
    const Mat3 ct = ref.states[k].rot().transpose();
    EXPECT_NEAR((imu[k].gyro - ct * ins::earth_rate_ecef()).norm(), expected, 1e-6);
  }
}

TEST(OuBias, FixedPointWithoutNoise) {
  std::mt19937_64 rng(3);
  const Vec3 beta(0.1, -0.2, 0.3);
  EXPECT_EQ(ou_bias_step(beta, 1.0, beta, 0.0, 0.005, rng), beta);
}

TEST(OuBias, SingleDeterministicStep) {
  std::mt19937_64 rng(3);
  const Vec3 next = ou_bias_step(Vec3::Zero(), 1.0, Vec3::Ones(), 0.0, 0.005, rng);
  EXPECT_LT((next - Vec3::Constant(0.005)).norm(), 1e-15);
}

TEST(OuBias, StationaryVariance) {
  std::mt19937_64 rng(11);
  const double tau = 1.0, big_b = 0.3, dt = 0.005;
  Vec3 b = Vec3::Zero();
  for (int k = 0; k < 2000; ++k) b = ou_bias_step(b, tau, Vec3::Zero(), big_b, dt, rng);
  double sum_sq = 0.0;
  const int n = 1000000;
  for (int k = 0; k < n; ++k) {
    b = ou_bias_step(b, tau, Vec3::Zero(), big_b, dt, rng);
    sum_sq += b.squaredNorm();
  }
  const double var = sum_sq / (3.0 * n);
  EXPECT_NEAR(var, big_b * big_b / (2.0 * tau), 0.1 * big_b * big_b / (2.0 * tau));
}

TEST(OuBias, UnstableStepRejected) {
  std::mt19937_64 rng(3);
  try {
    ou_bias_step(Vec3::Zero(), 250.0, Vec3::Zero(), 0.0, 0.005, rng);
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnstableStep);
  }
}

TEST(CorruptImu, ZeroConfigIsIdentity) {
  const ReferenceTrajectory ref = make_reference(Profile::kCircular);
  const std::vector<ImuSample> ideal = inverse_mechanization(ref);
  std::mt19937_64 rng(5);
  const CorruptedImu out = corrupt_imu(ideal, SimNoiseConfig::zero(), rng);
  ASSERT_EQ(out.samples.size(), ideal.size());
  for (std::size_t k = 0; k < ideal.size(); ++k) {
    ASSERT_EQ(out.samples[k].gyro, ideal[k].gyro);
    ASSERT_EQ(out.samples[k].accel, ideal[k].accel);
    ASSERT_EQ(out.samples[k].t, ideal[k].t);
  }
}

TEST(CorruptImu, WhiteNoiseLevelAndMean) {
  SimNoiseConfig cfg = SimNoiseConfig::zero();
  cfg.ng = 0.09 * (kPi / 180.0) / 60.0;
  cfg.na = 0.008 / 60.0;
  const double expected_g = 0.09 * (kPi / 180.0) / 60.0 * std::sqrt(200.0);
  const double expected_a = 0.008 / 60.0 * std::sqrt(200.0);
  EXPECT_NEAR(cfg.ng * std::sqrt(200.0), expected_g, 1e-12);

  const std::size_t n = 200000;
  std::mt19937_64 rng(17);
  const CorruptedImu out = corrupt_imu(stationary_stream(n, 200.0), cfg, rng);
  for (int axis = 0; axis < 3; ++axis) {
    double sg = 0.0, sg2 = 0.0, sa = 0.0, sa2 = 0.0;
    for (const ImuSample& s : out.samples) {
      sg += s.gyro[axis];
      sg2 += s.gyro[axis] * s.gyro[axis];
      sa += s.accel[axis];
      sa2 += s.accel[axis] * s.accel[axis];
    }
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(std::sqrt(sg2 / nn), expected_g, 0.01 * expected_g);
    EXPECT_NEAR(std::sqrt(sa2 / nn), expected_a, 0.01 * expected_a);
    EXPECT_LT(std::abs(sg / nn), 4.0 * expected_g / std::sqrt(nn));
    EXPECT_LT(std::abs(sa / nn), 4.0 * expected_a / std::sqrt(nn));
  }
}

TEST(CorruptImu, AllanSlopeOfWhiteNoise) {
  SimNoiseConfig cfg = SimNoiseConfig::zero();
  cfg.ng = 0.09 * (kPi / 180.0) / 60.0;
  std::mt19937_64 rng(23);
  const CorruptedImu out = corrupt_imu(stationary_stream(400000, 200.0), cfg, rng);
  std::vector<double> rate;
  rate.reserve(out.samples.size());
  for (const ImuSample& s : out.samples) rate.push_back(s.gyro.x());
  const double a1 = oracle::allan_deviation(rate, 0.005, 10);
  const double a2 = oracle::allan_deviation(rate, 0.005, 1000);
  const double slope = std::log10(a2 / a1) / 2.0;
  EXPECT_NEAR(slope, -0.5, 0.05);
  // Angle random walk read off at tau = 1 s equals the density.
  EXPECT_NEAR(oracle::allan_deviation(rate, 0.005, 200), cfg.ng, 0.05 * cfg.ng);
}

TEST(CorruptImu, ConstantTurnOnBias) {
  SimNoiseConfig cfg = SimNoiseConfig::zero();
  cfg.beta_a = 0.01;
  cfg.beta_g = 0.001;
  std::mt19937_64 rng(29);
  const CorruptedImu out = corrupt_imu(stationary_stream(100, 200.0), cfg, rng);
  EXPECT_EQ(out.bias_a.size(), 101u);
  for (std::size_t k = 0; k < 100; ++k) {
    EXPECT_LT((out.bias_a[k] - Vec3::Constant(0.01)).norm(), 1e-15);
    EXPECT_LT((out.samples[k].gyro - Vec3::Constant(0.001)).norm(), 1e-15);
  }
}

namespace {

// A short static trajectory whose body axes coincide with ECEF.
ReferenceTrajectory identity_reference(std::size_t n, double rate) {
  ReferenceTrajectory ref;
  ref.rate = rate;
  const Vec3 p = ins::ecef_from_geodetic({0.7, 0.1, 100.0});
  for (std::size_t k = 0; k < n; ++k) {
    ref.t.push_back(static_cast<double>(k) / rate);
    ref.states.emplace_back(Mat3::Identity(), Vec3::Zero(), p, lie::Vec6::Zero());
  }
  return ref;
}

}  // namespace

TEST(GenGnss, NoiselessFixesMatchReference) {
  const ReferenceTrajectory ref = make_reference(Profile::kHelicoidal);
  std::mt19937_64 rng(1);
  const auto fixes = gen_gnss(ref, {}, SimNoiseConfig::zero(), 1.0, rng);
  ASSERT_EQ(fixes.size(), (ref.states.size() + 199) / 200);
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    EXPECT_EQ(fixes[i].pos, ref.states[200 * i].pos());
    EXPECT_EQ(fixes[i].t, ref.t[200 * i]);
  }
}

TEST(GenGnss, LeverArmOffset) {
  const ReferenceTrajectory ref = identity_reference(10, 50.0);
  ins::LeverArm lever;
  lever.l_b = Vec3(1.0, 0.0, 0.0);
  std::mt19937_64 rng(1);
  const auto fixes = gen_gnss(ref, lever, SimNoiseConfig::zero(), 10.0, rng);
  ASSERT_EQ(fixes.size(), 2u);
  EXPECT_LT((fixes[0].pos - ref.states[0].pos() - Vec3(1.0, 0.0, 0.0)).norm(), 1e-12);
}

TEST(GenGnss, NoiseLevelPerAxis) {
  const ReferenceTrajectory ref = identity_reference(10000, 50.0);
  SimNoiseConfig cfg = SimNoiseConfig::zero();
  cfg.sigma_xyz = Vec3(0.01, 0.02, 0.03);
  std::mt19937_64 rng(31);
  const auto fixes = gen_gnss(ref, {}, cfg, 50.0, rng);
  ASSERT_EQ(fixes.size(), 10000u);
  Vec3 sum_sq = Vec3::Zero();
  Vec3 sum = Vec3::Zero();
  for (const auto& f : fixes) {
    const Vec3 d = f.pos - ref.states[0].pos();
    sum += d;
    sum_sq += d.cwiseProduct(d);
    EXPECT_EQ(f.sigma, cfg.sigma_xyz);
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::sqrt(sum_sq[i] / 1e4), cfg.sigma_xyz[i], 0.03 * cfg.sigma_xyz[i]);
    EXPECT_LT(std::abs(sum[i] / 1e4), 4.0 * cfg.sigma_xyz[i] / 100.0);
  }
}

TEST(GenGnss, NedSigmaRotatesCovariance) {
  const ReferenceTrajectory ref = identity_reference(20000, 50.0);
  SimNoiseConfig cfg = SimNoiseConfig::zero();
  cfg.sigma_xyz = Vec3(0.01, 0.01, 0.05);
  cfg.sigma_frame = SigmaFrame::kNed;
  std::mt19937_64 rng(37);
  const auto fixes = gen_gnss(ref, {}, cfg, 50.0, rng);
  const ins::Geodetic g = ins::geodetic_from_ecef(ref.states[0].pos());
  const Mat3 c = ins::ecef_from_ned(g.lat, g.lon);
  Vec3 sum_sq = Vec3::Zero();
  for (const auto& f : fixes) {
    const Vec3 d = c.transpose() * (f.pos - ref.states[0].pos());
    sum_sq += d.cwiseProduct(d);
  }
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::sqrt(sum_sq[i] / 2e4), cfg.sigma_xyz[i], 0.03 * cfg.sigma_xyz[i]);
  }
}

TEST(GenGnss, RateMustDivide) {
  const ReferenceTrajectory ref = identity_reference(100, 50.0);
  std::mt19937_64 rng(1);
  EXPECT_THROW(gen_gnss(ref, {}, SimNoiseConfig::zero(), 3.0, rng), Error);
}

TEST(Outliers, ExactMagnitude) {
  std::vector<GnssFix> fixes(20);
  for (std::size_t i = 0; i < fixes.size(); ++i) fixes[i].t = static_cast<double>(i);
  const std::vector<std::size_t> epochs{2, 5, 11};
  std::mt19937_64 rng(41);
  const auto out = inject_outliers(fixes, epochs, 1.0, rng);
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    const bool hit = i == 2 || i == 5 || i == 11;
    EXPECT_NEAR(out[i].pos.norm(), hit ? 1.0 : 0.0, 1e-12);
    EXPECT_EQ(out[i].sigma, fixes[i].sigma);
  }
}

TEST(Outliers, EmptyListLeavesFixes) {
  const ReferenceTrajectory ref = make_reference(Profile::kCircular);
  std::mt19937_64 rng(1);
  const auto fixes = gen_gnss(ref, {}, SimNoiseConfig{}, 1.0, rng);
  const auto out = inject_outliers(fixes, {}, 1.0, rng);
  ASSERT_EQ(out.size(), fixes.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].pos, fixes[i].pos);
  const std::vector<std::size_t> bad{fixes.size()};
  EXPECT_THROW(inject_outliers(fixes, bad, 1.0, rng), Error);
}

TEST(Simulate, SameSeedSameData) {
  SimConfig cfg;
  cfg.params.flight_s = 40.0;
  cfg.noise.seed = 99;
  const SimDataset a = simulate(cfg);
  const SimDataset b = simulate(cfg);
  ASSERT_EQ(a.imu.size(), b.imu.size());
  ASSERT_EQ(a.gnss.size(), b.gnss.size());
  for (std::size_t k = 0; k < a.imu.size(); ++k) {
    ASSERT_EQ(a.imu[k].gyro, b.imu[k].gyro);
    ASSERT_EQ(a.imu[k].accel, b.imu[k].accel);
  }
  for (std::size_t k = 0; k < a.gnss.size(); ++k) ASSERT_EQ(a.gnss[k].pos, b.gnss[k].pos);

  cfg.noise.seed = 100;
  const SimDataset c = simulate(cfg);
  EXPECT_NE(a.imu[10].gyro, c.imu[10].gyro);
}

TEST(Simulate, TruthCarriesBiases) {
  SimConfig cfg;
  cfg.params.flight_s = 40.0;
  cfg.noise.seed = 7;
  const SimDataset ds = simulate(cfg);
  ASSERT_EQ(ds.truth.size(), ds.imu.size());
  EXPECT_NEAR(ds.truth[0].accel_bias().x(), cfg.noise.beta_a, 1e-15);
  EXPECT_NEAR(ds.truth[0].gyro_bias().z(), cfg.noise.beta_g, 1e-15);
  EXPECT_EQ(ds.truth[100].pos(), ds.reference.states[100].pos());
}
