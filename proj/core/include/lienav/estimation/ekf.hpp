#pragma once

// Discrete EKF on G: prediction through the left velocity, Joseph-form
// update with a chi-square innovation gate.

#include <optional>

#include "lienav/estimation/models.hpp"
#include "lienav/lie/concentrated_gaussian.hpp"

namespace lienav::estimation {

using lie::ConcentratedGaussian;

enum class GateMode { kSoft, kHard, kOff };

struct GateConfig {
  double kappa = 16.26623619623813;  // chi2_3 quantile at 0.999
  GateMode mode = GateMode::kSoft;
};

struct GateReport {
  double zeta = 0.0;
  double gamma = 1.0;
  bool accepted = true;
  Vec3 innovation = Vec3::Zero();
  Mat3 innovation_cov = Mat3::Zero();
};

struct PredictResult {
  ConcentratedGaussian state;
  Tangent omega_dt;
  Mat15 F;
};

struct UpdateResult {
  ConcentratedGaussian state;
  GateReport gate;
};

PredictResult ekf_predict(const ConcentratedGaussian& state, const ImuSample& u, double dt,
                          const ProcessModel& model);
PredictResult ekf_predict(const ConcentratedGaussian& state, const ImuSample& u, double dt,
                          const ins::ImuNoiseParams& params);

/// Generic update with a 3-dimensional measurement y ~ N(predict(x), R).
UpdateResult ekf_update(const ConcentratedGaussian& state, const Vec3& y, const Mat3& R,
                        const MeasurementModel& model, const GateConfig& gate);
UpdateResult ekf_update(const ConcentratedGaussian& state, const ins::GnssFix& fix,
                        const ins::LeverArm& lever, const GateConfig& gate);

/// innovation^T Xi^-1 innovation. Throws kSingularInnovation if Xi is not SPD.
double nrs(const Vec3& innovation, const Mat3& xi);

/// min(1, kappa / zeta); 1 for zeta == 0.
double innovation_weight(double zeta, double kappa);

/// chi2_3 quantile at the given confidence.
double default_kappa(double confidence = 0.999);

}  // namespace lienav::estimation
