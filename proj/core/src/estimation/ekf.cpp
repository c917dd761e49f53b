#include "lienav/estimation/ekf.hpp"

#include <string>

#include <Eigen/Cholesky>
#include <boost/math/distributions/chi_squared.hpp>

#include "lienav/error.hpp"

namespace lienav::estimation {

PredictResult ekf_predict(const ConcentratedGaussian& state, const ImuSample& u, double dt,
                          const ProcessModel& model) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ekf_predict: dt must be positive");
  if (!u.gyro.allFinite() || !u.accel.allFinite()) {
    throw Error(ErrorKind::kData, "ekf_predict: non-finite IMU sample at t=" + std::to_string(u.t));
  }
  const Tangent omega_dt = model.velocity(state.mean, u) * dt;
  const Mat15 jr = lie::right_jacobian(omega_dt);
  const Mat15 f =
      lie::group_exp(-omega_dt).adjoint() + jr * model.velocity_jacobian(state.mean, u) * dt;

  PredictResult out;
  out.state.mean = state.mean * lie::group_exp(omega_dt);
  out.state.cov = lie::symmetrized(f * state.cov * f.transpose() +
                                   jr * model.noise(dt) * jr.transpose());
  out.omega_dt = omega_dt;
  out.F = f;
  if (!out.state.cov.allFinite()) {
    throw Error(ErrorKind::kDivergence, "ekf_predict: non-finite covariance at t=" + std::to_string(u.t));
  }
  return out;
}

PredictResult ekf_predict(const ConcentratedGaussian& state, const ImuSample& u, double dt,
                          const ins::ImuNoiseParams& params) {
  return ekf_predict(state, u, dt, InsProcessModel(params));
}

double nrs(const Vec3& innovation, const Mat3& xi) {
  const Eigen::LLT<Mat3> llt(xi);
  if (llt.info() != Eigen::Success || !xi.allFinite()) {
    throw Error(ErrorKind::kSingularInnovation, "innovation covariance is not positive definite");
  }
  return innovation.dot(llt.solve(innovation));
}

double innovation_weight(double zeta, double kappa) {
  if (zeta <= kappa) return 1.0;
  return kappa / zeta;
}

UpdateResult ekf_update(const ConcentratedGaussian& state, const Vec3& y, const Mat3& R,
                        const MeasurementModel& model, const GateConfig& gate) {
  if (!y.allFinite() || !R.allFinite()) {
    throw Error(ErrorKind::kData, "ekf_update: non-finite measurement");
  }
  if (!(gate.kappa > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ekf_update: kappa must be positive");

  const Mat15& p = state.cov;
  const Mat3x15 h = model.jacobian(state.mean);
  const Eigen::Matrix<double, lie::kDim, 3> pht = p * h.transpose();
  const Mat3 xi = R + h * pht;
  const Eigen::LLT<Mat3> llt(xi);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingularInnovation, "ekf_update: innovation covariance is singular");
  }

  UpdateResult out;
  GateReport& report = out.gate;
  report.innovation = y - model.predict(state.mean);
  report.innovation_cov = xi;
  report.zeta = report.innovation.dot(llt.solve(report.innovation));
  switch (gate.mode) {
    case GateMode::kOff:
      report.gamma = 1.0;
      report.accepted = true;
      break;
    case GateMode::kSoft:
    case GateMode::kHard:
      report.gamma = innovation_weight(report.zeta, gate.kappa);
      report.accepted = report.zeta <= gate.kappa;
      break;
  }

  if (gate.mode == GateMode::kHard && !report.accepted) {
    out.state = state;
    return out;
  }

  // K = P H^T Xi^-1, via the symmetric solve on the transpose.
  const Eigen::Matrix<double, lie::kDim, 3> k = llt.solve(pht.transpose()).transpose();
  const Tangent correction = report.gamma * (k * report.innovation);
  out.state.mean = state.mean * lie::group_exp(correction);
  const Mat15 ikh = Mat15::Identity() - k * h;
  out.state.cov = lie::symmetrized(ikh * p * ikh.transpose() + k * R * k.transpose());
  return out;
}

UpdateResult ekf_update(const ConcentratedGaussian& state, const ins::GnssFix& fix,
                        const ins::LeverArm& lever, const GateConfig& gate) {
  if (!fix.pos.allFinite() || !fix.sigma.allFinite()) {
    throw Error(ErrorKind::kData, "ekf_update: non-finite GNSS fix at t=" + std::to_string(fix.t));
  }
  if ((fix.sigma.array() <= 0.0).any()) {
    throw Error(ErrorKind::kData, "ekf_update: GNSS sigma must be positive at t=" + std::to_string(fix.t));
  }
  const Mat3 r = fix.sigma.array().square().matrix().asDiagonal();
  return ekf_update(state, fix.pos, r, GnssMeasurementModel(lever), gate);
}

double default_kappa(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "default_kappa: confidence must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::chi_squared(3.0), confidence);
}

}  // namespace lienav::estimation
