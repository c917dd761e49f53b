#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "lienav/error.hpp"
#include "lienav/alignment/alignment.hpp"
#include "lienav/estimation/filter.hpp"
#include "lienav/sim/simulate.hpp"
#include "oracles.hpp"
#include "random_states.hpp"

using namespace lienav;
using namespace lienav::estimation;
using lie::group_exp;
using lie::group_log;
using testing_support::normal3;
using testing_support::random_nav_state;

namespace {

// Constant velocity, no Jacobian, no noise.
class ConstantVelocity final : public ProcessModel {
 public:
  explicit ConstantVelocity(const Tangent& w) : w_(w) {}
  Tangent velocity(const GroupElement&, const ImuSample&) const override { return w_; }
  Mat15 velocity_jacobian(const GroupElement&, const ImuSample&) const override { return Mat15::Zero(); }
  Mat15 noise(double) const override { return Mat15::Zero(); }

 private:
  Tangent w_;
};

Mat15 random_spd(std::mt19937_64& rng, double scale) {
  Mat15 l;
  std::normal_distribution<double> n;
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) l(i, j) = n(rng);
  return scale * (l * l.transpose() / 15.0 + 0.1 * Mat15::Identity());
}

GroupElement level_state() {
  const ins::Geodetic g{0.8, 0.2, 250.0};
  return {ins::attitude_ecef(Vec3(0.0, 0.0, 0.4), g.lat, g.lon), Vec3::Zero(), ins::ecef_from_geodetic(g),
          lie::Vec6::Zero()};
}

ins::GnssFix fix_at(const Vec3& p, const Vec3& sigma = Vec3(0.01, 0.01, 0.03)) { return {0.0, p, sigma}; }

}  // namespace

TEST(Predict, NoNoiseNoJacobianIsPureAdjointTransport) {
  std::mt19937_64 rng(1);
  const Tangent w = testing_support::random_tangent(rng, 0.5);
  const ConcentratedGaussian s{random_nav_state(rng), random_spd(rng, 1e-3)};
  const double dt = 0.01;
  const PredictResult r = ekf_predict(s, ImuSample{}, dt, ConstantVelocity(w));
  const Mat15 ad = group_exp(-w * dt).adjoint();
  EXPECT_LT((r.state.cov - ad * s.cov * ad.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(r.state.mean.is_approx(s.mean * group_exp(w * dt), 1e-9));
  EXPECT_EQ(r.state.cov, r.state.cov.transpose());
}

TEST(Predict, EquilibriumKeepsMeanAndAddsNoise) {
  const GroupElement x = level_state();
  const Mat3 ct = x.rot().transpose();
  const ImuSample u{0.0, ct * ins::earth_rate_ecef(), -ct * ins::gravity_ecef(x.pos())};
  const ins::ImuNoiseParams params{1e-3, 1e-2, 1e-5, 1e-4};
  const double dt = 0.005;
  const ConcentratedGaussian s{x, 1e-4 * Mat15::Identity()};
  const PredictResult r = ekf_predict(s, u, dt, params);
  EXPECT_TRUE(r.state.mean.is_approx(x, 1e-12));
  EXPECT_LT(r.omega_dt.cwiseAbs().maxCoeff(), 1e-15);
  const Mat15 f = Mat15::Identity() + ins::jacobian_C(x, u) * dt;
  EXPECT_LT((r.F - f).cwiseAbs().maxCoeff(), 1e-15);
  const Mat15 expected = f * s.cov * f.transpose() + ins::process_noise_Q(params, dt);
  EXPECT_LT((r.state.cov - expected).cwiseAbs().maxCoeff(), 1e-18);
}

TEST(Predict, MatchesMonteCarloPushForward) {
  std::mt19937_64 rng(2);
  const GroupElement x = random_nav_state(rng);
  const ImuSample u{0.0, normal3(rng, 0.3), normal3(rng, 5.0)};
  const ins::ImuNoiseParams none{0, 0, 0, 0};
  const double dt = 0.01;
  const ConcentratedGaussian s{x, 1e-6 * Mat15::Identity()};
  const PredictResult r = ekf_predict(s, u, dt, none);

  const lie::CgdSampler sampler(s);
  const GroupElement inv_mean = r.state.mean.inverse();
  const int n = 100000;
  Tangent mean = Tangent::Zero();
  Mat15 second = Mat15::Zero();
  for (int i = 0; i < n; ++i) {
    const Tangent e = group_log(inv_mean * ins::propagate(sampler.draw(rng), u, dt));
    mean += e;
    second += e * e.transpose();
  }
  mean /= n;
  const Mat15 cov = second / n - mean * mean.transpose();
  const Tangent sd = r.state.cov.diagonal().cwiseSqrt();
  EXPECT_LT(mean.cwiseQuotient(sd).cwiseAbs().maxCoeff(), 0.03);
  EXPECT_LT((cov.diagonal().cwiseQuotient(r.state.cov.diagonal()) - Tangent::Ones()).cwiseAbs().maxCoeff(), 0.03);
  const Mat15 scale = sd * sd.transpose();
  EXPECT_LT((cov - r.state.cov).cwiseQuotient(scale).cwiseAbs().maxCoeff(), 0.03);
}

TEST(Predict, RejectsBadInput) {
  const ConcentratedGaussian s{level_state(), Mat15::Identity()};
  ImuSample u;
  u.gyro(1) = std::nan("");
  try {
    ekf_predict(s, u, 0.01, ins::ImuNoiseParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
  EXPECT_THROW(ekf_predict(s, ImuSample{}, 0.0, ins::ImuNoiseParams{}), Error);
}

TEST(Nrs, Values) {
  EXPECT_EQ(nrs(Vec3::Zero(), Mat3::Identity()), 0.0);
  EXPECT_EQ(nrs(Vec3(3, 0, 0), Mat3::Identity()), 9.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Mat3 l = Mat3::Random();
    const Mat3 xi = l * l.transpose() + 0.1 * Mat3::Identity();
    const Vec3 v = normal3(rng);
    EXPECT_NEAR(nrs(v, xi), v.dot(xi.inverse() * v), 1e-10 * std::max(1.0, v.dot(xi.inverse() * v)));
  }
  try {
    nrs(Vec3(1, 0, 0), Mat3::Zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularInnovation);
  }
}

TEST(Gate, WeightFormula) {
  const double kappa = default_kappa();
  EXPECT_EQ(innovation_weight(2.0 * kappa, kappa), 0.5);
  EXPECT_EQ(innovation_weight(kappa, kappa), 1.0);
  EXPECT_EQ(innovation_weight(0.0, kappa), 1.0);
  EXPECT_EQ(innovation_weight(4.0 * kappa, kappa), 0.25);
}

TEST(Gate, DefaultKappaMatchesChiSquareOracle) {
  EXPECT_NEAR(default_kappa(0.95), 7.815, 0.01);
  EXPECT_NEAR(default_kappa(0.999), 16.27, 0.02);
  EXPECT_NEAR(default_kappa(0.95), oracle::chi2_3_quantile(0.95), 1e-9);
  EXPECT_NEAR(default_kappa(0.999), oracle::chi2_3_quantile(0.999), 1e-9);
  EXPECT_NEAR(GateConfig{}.kappa, oracle::chi2_3_quantile(0.999), 1e-9);
  double prev = 0.0;
  for (double c = 0.05; c < 1.0; c += 0.05) {
    const double k = default_kappa(c);
    EXPECT_GT(k, prev);
    prev = k;
  }
  EXPECT_THROW(default_kappa(1.0), Error);
}

TEST(Update, PerfectMeasurementChangesNothing) {
  std::mt19937_64 rng(4);
  const ConcentratedGaussian s{random_nav_state(rng), random_spd(rng, 1e-2)};
  const ins::LeverArm lever{Vec3(0.1, -0.2, 0.3)};
  const UpdateResult r = ekf_update(s, fix_at(ins::measurement_h(s.mean, lever)), lever, GateConfig{});
  EXPECT_EQ(r.gate.zeta, 0.0);
  EXPECT_EQ(r.gate.gamma, 1.0);
  EXPECT_TRUE(r.gate.accepted);
  EXPECT_TRUE(r.state.mean.is_approx(s.mean, 1e-12));
}

TEST(Update, ScalarKalmanBlend) {
  const GroupElement x(Mat3::Identity(), Vec3::Zero(), Vec3(6.4e6, 10.0, -5.0), lie::Vec6::Zero());
  const double p = 0.04, r = 0.01;
  const ConcentratedGaussian s{x, p * Mat15::Identity()};
  const Vec3 y = x.pos() + Vec3(0.1, -0.2, 0.05);
  GateConfig gate;
  gate.mode = GateMode::kOff;
  const UpdateResult u = ekf_update(s, fix_at(y, Vec3::Constant(std::sqrt(r))), {}, gate);
  const Vec3 expected = x.pos() + p / (p + r) * (y - x.pos());
  EXPECT_LT((u.state.mean.pos() - expected).norm(), 1e-9);
  EXPECT_NEAR(u.state.cov(6, 6), p * r / (p + r), 1e-15);
  EXPECT_EQ(u.state.cov(0, 0), p);
}

TEST(Update, JosephFormAndSymmetry) {
  std::mt19937_64 rng(5);
  const ConcentratedGaussian s{random_nav_state(rng), random_spd(rng, 1e-2)};
  const ins::LeverArm lever{normal3(rng)};
  const ins::GnssFix fix = fix_at(ins::measurement_h(s.mean, lever) + normal3(rng, 0.05));
  GateConfig gate;
  gate.mode = GateMode::kOff;
  const UpdateResult u = ekf_update(s, fix, lever, gate);
  const Eigen::Matrix<double, 3, 15> h = ins::jacobian_H(s.mean, lever);
  const Mat3 r = fix.sigma.array().square().matrix().asDiagonal();
  const Eigen::Matrix<double, 15, 3> k = s.cov * h.transpose() * (h * s.cov * h.transpose() + r).inverse();
  const Mat15 ikh = Mat15::Identity() - k * h;
  const Mat15 joseph = ikh * s.cov * ikh.transpose() + k * r * k.transpose();
  EXPECT_LT((u.state.cov - joseph).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(u.state.cov, u.state.cov.transpose());
  EXPECT_TRUE(u.state.mean.is_approx(s.mean * group_exp(k * u.gate.innovation), 1e-9));
}

TEST(Update, HugeNoiseLeavesStateAlone) {
  std::mt19937_64 rng(6);
  const ConcentratedGaussian s{random_nav_state(rng), random_spd(rng, 1e-2)};
  const ins::GnssFix fix = fix_at(s.mean.pos() + Vec3(1, 2, 3), Vec3::Constant(1e6));
  const UpdateResult u = ekf_update(s, fix, {}, GateConfig{});
  EXPECT_TRUE(u.state.mean.is_approx(s.mean, 1e-9));
  EXPECT_LT((u.state.cov - s.cov).cwiseAbs().maxCoeff() / s.cov.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Update, SoftGateBelowThresholdEqualsUngated) {
  std::mt19937_64 rng(7);
  const ConcentratedGaussian s{random_nav_state(rng), random_spd(rng, 1e-2)};
  const ins::GnssFix fix = fix_at(s.mean.pos() + normal3(rng, 0.01));
  GateConfig soft, off;
  off.mode = GateMode::kOff;
  const UpdateResult a = ekf_update(s, fix, {}, soft);
  const UpdateResult b = ekf_update(s, fix, {}, off);
  ASSERT_LE(a.gate.zeta, soft.kappa);
  EXPECT_EQ(a.state.mean.matrix(), b.state.mean.matrix());
  EXPECT_EQ(a.state.cov, b.state.cov);
}

TEST(Update, SoftGateScalesInnovationOnly) {
  const GroupElement x(Mat3::Identity(), Vec3::Zero(), Vec3(6.4e6, 0, 0), lie::Vec6::Zero());
  const ConcentratedGaussian s{x, 1e-4 * Mat15::Identity()};
  const ins::GnssFix fix = fix_at(x.pos() + Vec3(1.0, 0, 0), Vec3::Constant(0.01));
  GateConfig soft, off;
  off.mode = GateMode::kOff;
  const UpdateResult a = ekf_update(s, fix, {}, soft);
  const UpdateResult b = ekf_update(s, fix, {}, off);
  // zeta = 1 / (1e-4 + 1e-4) = 5000
  EXPECT_NEAR(a.gate.zeta, 5000.0, 1e-6);
  EXPECT_FALSE(a.gate.accepted);
  EXPECT_NEAR(a.gate.gamma, soft.kappa / 5000.0, 1e-15);
  EXPECT_NEAR(a.state.mean.pos().x() - x.pos().x(), a.gate.gamma * 0.5, 1e-9);
  EXPECT_EQ(a.state.cov, b.state.cov);
}

TEST(Update, SoftGateHalvesAtTwiceKappa) {
  const GroupElement x(Mat3::Identity(), Vec3::Zero(), Vec3(6.4e6, 0, 0), lie::Vec6::Zero());
  const ConcentratedGaussian s{x, 1e-4 * Mat15::Identity()};
  GateConfig soft;
  // zeta = d^2 / 2e-4 = 2 kappa
  const double d = std::sqrt(2.0 * soft.kappa * 2e-4);
  const UpdateResult a = ekf_update(s, fix_at(x.pos() + Vec3(d, 0, 0), Vec3::Constant(0.01)), {}, soft);
  EXPECT_NEAR(a.gate.zeta, 2.0 * soft.kappa, 1e-6);
  EXPECT_NEAR(a.gate.gamma, 0.5, 1e-8);
  EXPECT_DOUBLE_EQ(a.gate.gamma * a.gate.zeta, soft.kappa);
}

TEST(Update, HardGateRejects) {
  const GroupElement x(Mat3::Identity(), Vec3::Zero(), Vec3(6.4e6, 0, 0), lie::Vec6::Zero());
  const ConcentratedGaussian s{x, 1e-4 * Mat15::Identity()};
  GateConfig hard;
  hard.mode = GateMode::kHard;
  const UpdateResult a = ekf_update(s, fix_at(x.pos() + Vec3(1.0, 0, 0)), {}, hard);
  EXPECT_FALSE(a.gate.accepted);
  EXPECT_EQ(a.state.mean.matrix(), x.matrix());
  EXPECT_EQ(a.state.cov, s.cov);
}

TEST(Update, ErrorCases) {
  const ConcentratedGaussian s{level_state(), Mat15::Zero()};
  try {
    ekf_update(s, Vec3(1, 2, 3), Mat3::Zero(), GnssMeasurementModel({}), GateConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularInnovation);
  }
  try {
    ekf_update(s, fix_at(Vec3(1, 2, 3), Vec3(0.01, -0.01, 0.03)), {}, GateConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
  EXPECT_THROW(ekf_update(s, fix_at(Vec3(std::nan(""), 0, 0)), {}, GateConfig{}), Error);
}

TEST(RunFilter, FixTimingRules) {
  // Stationary equilibrium stream at 100 Hz; fixes on, between and far from epochs.
  const GroupElement x = level_state();
  const Mat3 ct = x.rot().transpose();
  std::vector<ImuSample> imu;
  for (int k = 0; k <= 100; ++k) {
    imu.push_back({0.01 * k, ct * ins::earth_rate_ecef(), -ct * ins::gravity_ecef(x.pos())});
  }
  std::vector<ins::GnssFix> fixes = {
      {0.0, x.pos(), Vec3::Constant(0.01)},     // fused at epoch 0
      {0.2, x.pos(), Vec3::Constant(0.01)},     // exact
      {0.2049, x.pos(), Vec3::Constant(0.01)},  // lands on 0.21, lag above half a period: dropped
      {0.3031, x.pos(), Vec3::Constant(0.01)},  // same
      {0.4998, x.pos(), Vec3::Constant(0.01)},  // fused at 0.50
      {0.6, x.pos(), Vec3::Constant(0.01)},     // two fixes for one epoch: the older is dropped
      {0.6 + 1e-9, x.pos(), Vec3::Constant(0.01)},
      {5.0, x.pos(), Vec3::Constant(0.01)},     // beyond the stream
  };
  std::vector<double> fused_at;
  const FilterRun run = run_filter({x, 1e-4 * Mat15::Identity()}, imu, fixes,
                                   InsProcessModel(ins::ImuNoiseParams{}), FilterOptions{},
                                   [&](const ins::GnssFix& f, const GateReport&) { fused_at.push_back(f.t); });
  EXPECT_EQ(run.stats.fused, 4u);
  EXPECT_EQ(run.stats.dropped, 4u);
  ASSERT_EQ(fused_at.size(), 4u);
  EXPECT_EQ(fused_at[0], 0.0);
  EXPECT_EQ(fused_at[1], 0.2);
  EXPECT_EQ(fused_at[2], 0.4998);
  EXPECT_EQ(fused_at[3], 0.6 + 1e-9);
  ASSERT_EQ(run.history.size(), imu.size());
  for (const FilterEpoch& e : run.history) {
    if (!e.gate) EXPECT_EQ(e.updated.cov, e.predicted.cov);
  }
  EXPECT_TRUE(run.history[20].gate.has_value());
  EXPECT_FALSE(run.history[21].gate.has_value());
}

TEST(Cycles, CovarianceStaysSpdOverLongRun) {
  sim::SimConfig cfg;
  cfg.params.flight_s = 470.0;  // with the 30 s static prefix: 1e5 IMU samples
  cfg.noise.seed = 11;
  const sim::SimDataset data = sim::simulate(cfg);
  ASSERT_EQ(data.imu.size(), 100000u);
  const InsProcessModel model(cfg.noise.filter_params());
  ConcentratedGaussian state{data.truth.front(), alignment::InitialSigma{}.covariance()};
  std::size_t next_fix = 1, updates = 0;
  for (std::size_t k = 1; k < data.imu.size(); ++k) {
    state = ekf_predict(state, data.imu[k - 1], data.imu[k].t - data.imu[k - 1].t, model).state;
    ASSERT_EQ(state.cov, state.cov.transpose());
    ASSERT_EQ(Eigen::LLT<Mat15>(state.cov).info(), Eigen::Success) << k;
    if (next_fix < data.gnss.size() && std::abs(data.gnss[next_fix].t - data.imu[k].t) < 1e-9) {
      state = ekf_update(state, data.gnss[next_fix++], {}, GateConfig{}).state;
      ASSERT_EQ(state.cov, state.cov.transpose());
      ASSERT_EQ(Eigen::LLT<Mat15>(state.cov).info(), Eigen::Success) << k;
      ++updates;
    }
  }
  std::size_t expected = 0;
  for (const auto& f : data.gnss) expected += f.t > 1e-9 && f.t <= data.imu.back().t + 1e-9;
  EXPECT_EQ(updates, expected);
  const Eigen::SelfAdjointEigenSolver<Mat15> es(state.cov);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_LT((state.mean.pos() - data.truth.back().pos()).norm(), 0.1);
}
