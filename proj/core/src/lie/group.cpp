#include "lienav/lie/group.hpp"

#include <cmath>
#include <numbers>

#include "lienav/error.hpp"

namespace lienav::lie {

namespace {

constexpr double kPatternTolerance = 1e-12;
constexpr double kSeriesTolerance = 1e-14;
constexpr int kSeriesMaxTerms = 30;

using Mat9 = Eigen::Matrix<double, 9, 9>;

// ad(x) restricted to the SE_2(3) coordinates; the T(6) block is zero.
Mat9 ad_se23(const Tangent& x) {
  Mat9 a = Mat9::Zero();
  const Mat3 phi = skew(x.segment<3>(slot::kPhi));
  a.block<3, 3>(0, 0) = phi;
  a.block<3, 3>(3, 0) = skew(x.segment<3>(slot::kNu));
  a.block<3, 3>(3, 3) = phi;
  a.block<3, 3>(6, 0) = skew(x.segment<3>(slot::kRho));
  a.block<3, 3>(6, 6) = phi;
  return a;
}

Mat15 jacobian_series(const Tangent& x, double sign) {
  const Mat9 a = ad_se23(x);
  Mat9 sum = Mat9::Identity();
  Mat9 power = Mat9::Identity();
  double factorial = 1.0;
  double s = 1.0;
  for (int k = 1; k <= kSeriesMaxTerms; ++k) {
    power = power * a;
    factorial *= static_cast<double>(k + 1);
    s *= sign;
    const Mat9 term = (s / factorial) * power;
    sum += term;
    if (term.cwiseAbs().maxCoeff() < kSeriesTolerance) break;
  }
  Mat15 j = Mat15::Identity();
  j.topLeftCorner<9, 9>() = sum;
  return j;
}

}  // namespace

Tangent make_tangent(const Vec3& phi, const Vec3& nu, const Vec3& rho,
                     const Vec3& dba, const Vec3& dbg) {
  Tangent x;
  x << phi, nu, rho, dba, dbg;
  return x;
}

GroupElement::GroupElement(const Mat3& rot, const Vec3& vel, const Vec3& pos, const Vec6& bias)
    : rot_(rot), vel_(vel), pos_(pos), bias_(bias) {}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  GroupElement out(rot_ * rhs.rot_, rot_ * rhs.vel_ + vel_, rot_ * rhs.pos_ + pos_,
                   bias_ + rhs.bias_);
  if (orthonormality_error(out.rot_) > kOrthoTolerance) {
    out.rot_ = orthonormalize(out.rot_);
  }
  return out;
}

GroupElement GroupElement::inverse() const {
  const Mat3 rt = rot_.transpose();
  return {rt, -rt * vel_, -rt * pos_, -bias_};
}

Mat12 GroupElement::matrix() const {
  Mat12 m = Mat12::Identity();
  m.block<3, 3>(0, 0) = rot_;
  m.block<3, 1>(0, 3) = vel_;
  m.block<3, 1>(0, 4) = pos_;
  m.block<6, 1>(5, 11) = bias_;
  return m;
}

GroupElement GroupElement::from_matrix(const Mat12& m) {
  return {m.block<3, 3>(0, 0), m.block<3, 1>(0, 3), m.block<3, 1>(0, 4), m.block<6, 1>(5, 11)};
}

Mat15 GroupElement::adjoint() const {
  Mat15 ad = Mat15::Identity();
  ad.block<3, 3>(0, 0) = rot_;
  ad.block<3, 3>(3, 0) = skew(vel_) * rot_;
  ad.block<3, 3>(3, 3) = rot_;
  ad.block<3, 3>(6, 0) = skew(pos_) * rot_;
  ad.block<3, 3>(6, 6) = rot_;
  return ad;
}

bool GroupElement::is_approx(const GroupElement& other, double tol) const {
  return (rot_ - other.rot_).cwiseAbs().maxCoeff() <= tol &&
         (vel_ - other.vel_).cwiseAbs().maxCoeff() <= tol &&
         (pos_ - other.pos_).cwiseAbs().maxCoeff() <= tol &&
         (bias_ - other.bias_).cwiseAbs().maxCoeff() <= tol;
}

Mat12 hat(const Tangent& x) {
  Mat12 m = Mat12::Zero();
  m.block<3, 3>(0, 0) = skew(x.segment<3>(slot::kPhi));
  m.block<3, 1>(0, 3) = x.segment<3>(slot::kNu);
  m.block<3, 1>(0, 4) = x.segment<3>(slot::kRho);
  m.block<6, 1>(5, 11) = x.segment<6>(slot::kBa);
  return m;
}

Tangent vee(const Mat12& m) {
  Mat12 residual = m;
  const Mat3 w = m.block<3, 3>(0, 0);
  const Vec3 phi(0.5 * (w(2, 1) - w(1, 2)), 0.5 * (w(0, 2) - w(2, 0)), 0.5 * (w(1, 0) - w(0, 1)));
  residual.block<3, 3>(0, 0) -= skew(phi);
  residual.block<3, 2>(0, 3).setZero();
  residual.block<6, 1>(5, 11).setZero();
  if (residual.cwiseAbs().maxCoeff() > kPatternTolerance) {
    throw Error(ErrorKind::kInvalidArgument, "vee: matrix is not an element of the algebra");
  }
  return make_tangent(phi, m.block<3, 1>(0, 3), m.block<3, 1>(0, 4), m.block<3, 1>(5, 11),
                      m.block<3, 1>(8, 11));
}

GroupElement group_exp(const Tangent& x) {
  const Vec3 phi = x.segment<3>(slot::kPhi);
  if (phi.norm() >= std::numbers::pi - kChartMargin) {
    throw Error(ErrorKind::kOutOfChart, "group_exp: rotation angle leaves the chart");
  }
  const Mat3 jl = so3_left_jacobian(phi);
  return {so3_exp(phi), jl * x.segment<3>(slot::kNu), jl * x.segment<3>(slot::kRho),
          x.segment<6>(slot::kBa)};
}

Tangent group_log(const GroupElement& g) {
  const Vec3 phi = so3_log(g.rot());
  const Mat3 jl_inv = so3_left_jacobian_inverse(phi);
  Tangent x;
  x << phi, jl_inv * g.vel(), jl_inv * g.pos(), g.bias();
  return x;
}

Mat15 ad_small(const Tangent& x) {
  Mat15 a = Mat15::Zero();
  a.topLeftCorner<9, 9>() = ad_se23(x);
  return a;
}

Mat15 right_jacobian(const Tangent& x) { return jacobian_series(x, -1.0); }

Mat15 left_jacobian(const Tangent& x) { return jacobian_series(x, 1.0); }

}  // namespace lienav::lie
