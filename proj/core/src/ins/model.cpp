#include "lienav/ins/model.hpp"

#include <Eigen/Geometry>

#include "lienav/error.hpp"

namespace lienav::ins {

using lie::skew;
namespace slot = lie::slot;

Tangent omega_fn(const GroupElement& x, const ImuSample& u) {
  const Mat3& c = x.rot();
  const Vec3 w_ie = earth_rate_ecef();
  const Vec3 accel = -2.0 * w_ie.cross(x.vel()) + gravity_ecef(x.pos());
  Tangent out = Tangent::Zero();
  out.segment<3>(slot::kPhi) = u.gyro - x.gyro_bias() - c.transpose() * w_ie;
  out.segment<3>(slot::kNu) = u.accel - x.accel_bias() + c.transpose() * accel;
  out.segment<3>(slot::kRho) = c.transpose() * x.vel();
  return out;
}

Mat15 jacobian_C(const GroupElement& x, const ImuSample& /*u*/) {
  const Mat3& c = x.rot();
  const Mat3 ct = c.transpose();
  const Vec3 w_ie = earth_rate_ecef();
  const Mat3 w_skew = skew(w_ie);
  const Vec3 accel = -2.0 * w_skew * x.vel() + gravity_ecef(x.pos());
  const Mat3 eye = Mat3::Identity();

  Mat15 j = Mat15::Zero();
  j.block<3, 3>(slot::kPhi, slot::kPhi) = -skew(ct * w_ie);
  j.block<3, 3>(slot::kPhi, slot::kBg) = -eye;
  j.block<3, 3>(slot::kNu, slot::kPhi) = skew(ct * accel);
  j.block<3, 3>(slot::kNu, slot::kNu) = -2.0 * ct * w_skew * c;
  j.block<3, 3>(slot::kNu, slot::kRho) = ct * gravity_gradient_ecef(x.pos()) * c;
  j.block<3, 3>(slot::kNu, slot::kBa) = -eye;
  j.block<3, 3>(slot::kRho, slot::kPhi) = skew(ct * x.vel());
  j.block<3, 3>(slot::kRho, slot::kNu) = eye;
  return j;
}

Mat15 process_noise_Q(const ImuNoiseParams& p, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kInvalidArgument, "process_noise_Q: dt must be positive");
  if (p.sigma_g < 0.0 || p.sigma_a < 0.0 || p.Bg < 0.0 || p.Ba < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "process_noise_Q: negative noise parameter");
  }
  lie::Tangent d = lie::Tangent::Zero();
  d.segment<3>(slot::kPhi).setConstant(p.sigma_g * p.sigma_g);
  d.segment<3>(slot::kNu).setConstant(p.sigma_a * p.sigma_a);
  d.segment<3>(slot::kBa).setConstant(p.Ba * p.Ba);
  d.segment<3>(slot::kBg).setConstant(p.Bg * p.Bg);
  return (d * dt).asDiagonal();
}

Vec3 measurement_h(const GroupElement& x, const LeverArm& lever) {
  return x.pos() + x.rot() * lever.l_b;
}

Mat3x15 jacobian_H(const GroupElement& x, const LeverArm& lever) {
  Mat3x15 h = Mat3x15::Zero();
  h.block<3, 3>(0, slot::kPhi) = -x.rot() * skew(lever.l_b);
  h.block<3, 3>(0, slot::kRho) = x.rot();
  return h;
}

}  // namespace lienav::ins
