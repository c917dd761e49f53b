#pragma once

// Model interfaces consumed by the filter. The INS implementations wrap
// lienav::ins; tests plug in other systems on the same group.

#include <Eigen/Core>

#include "lienav/ins/model.hpp"

namespace lienav::estimation {

using lie::GroupElement;
using lie::Mat15;
using lie::Tangent;
using ins::ImuSample;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat3x15 = Eigen::Matrix<double, 3, lie::kDim>;

class ProcessModel {
 public:
  virtual ~ProcessModel() = default;
  /// Left velocity Omega(x, u).
  virtual Tangent velocity(const GroupElement& x, const ImuSample& u) const = 0;
  /// d/d eps Omega(x exp(eps), u).
  virtual Mat15 velocity_jacobian(const GroupElement& x, const ImuSample& u) const = 0;
  /// Discrete process noise over dt.
  virtual Mat15 noise(double dt) const = 0;
};

class MeasurementModel {
 public:
  virtual ~MeasurementModel() = default;
  virtual Vec3 predict(const GroupElement& x) const = 0;
  /// d/d eps predict(x exp(eps)).
  virtual Mat3x15 jacobian(const GroupElement& x) const = 0;
};

class InsProcessModel final : public ProcessModel {
 public:
  explicit InsProcessModel(const ins::ImuNoiseParams& params) : params_(params) {}
  Tangent velocity(const GroupElement& x, const ImuSample& u) const override {
    return ins::omega_fn(x, u);
  }
  Mat15 velocity_jacobian(const GroupElement& x, const ImuSample& u) const override {
    return ins::jacobian_C(x, u);
  }
  Mat15 noise(double dt) const override { return ins::process_noise_Q(params_, dt); }

 private:
  ins::ImuNoiseParams params_;
};

class GnssMeasurementModel final : public MeasurementModel {
 public:
  explicit GnssMeasurementModel(const ins::LeverArm& lever) : lever_(lever) {}
  Vec3 predict(const GroupElement& x) const override { return ins::measurement_h(x, lever_); }
  Mat3x15 jacobian(const GroupElement& x) const override { return ins::jacobian_H(x, lever_); }

 private:
  ins::LeverArm lever_;
};

}  // namespace lienav::estimation
