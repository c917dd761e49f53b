#pragma once

// The matrix Lie group G = SE_2(3) x T(6) used as the navigation state.
//
// An element carries attitude C_b^e, velocity v^e, position p^e and the
// stacked IMU biases b = (b_a, b_g). Its 12x12 matrix form is
//
//   [ C  v  p | 0      ]
//   [ 0  1  0 | 0      ]
//   [ 0  0  1 | 0      ]
//   [---------+--------]
//   [    0    | I6   b ]
//   [    0    | 0    1 ]
//
// Tangent coordinates are ordered (phi, nu, rho, dba, dbg), matching the rows
// of the left-velocity function.

#include <Eigen/Core>

#include "lienav/lie/so3.hpp"

namespace lienav::lie {

inline constexpr int kDim = 15;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Tangent = Eigen::Matrix<double, kDim, 1>;
using Mat15 = Eigen::Matrix<double, kDim, kDim>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Offsets of the tangent blocks.
namespace slot {
inline constexpr int kPhi = 0;
inline constexpr int kNu = 3;
inline constexpr int kRho = 6;
inline constexpr int kBa = 9;
inline constexpr int kBg = 12;
}  // namespace slot

Tangent make_tangent(const Vec3& phi, const Vec3& nu, const Vec3& rho,
                     const Vec3& dba, const Vec3& dbg);

class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(const Mat3& rot, const Vec3& vel, const Vec3& pos, const Vec6& bias);

  static GroupElement identity() { return {}; }

  const Mat3& rot() const { return rot_; }
  const Vec3& vel() const { return vel_; }
  const Vec3& pos() const { return pos_; }
  const Vec6& bias() const { return bias_; }
  Vec3 accel_bias() const { return bias_.head<3>(); }
  Vec3 gyro_bias() const { return bias_.tail<3>(); }

  /// Group product; the rotation block is re-orthonormalized when it drifts
  /// past kOrthoTolerance.
  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;

  /// Dense 12x12 form.
  Mat12 matrix() const;
  static GroupElement from_matrix(const Mat12& m);

  /// Ad_G(g) in closed block form.
  Mat15 adjoint() const;

  bool is_approx(const GroupElement& other, double tol) const;

 private:
  Mat3 rot_ = Mat3::Identity();
  Vec3 vel_ = Vec3::Zero();
  Vec3 pos_ = Vec3::Zero();
  Vec6 bias_ = Vec6::Zero();
};

/// Algebra isomorphisms.
Mat12 hat(const Tangent& x);
/// Throws ErrorKind::kInvalidArgument if m violates the algebra pattern by
/// more than 1e-12.
Tangent vee(const Mat12& m);

GroupElement group_exp(const Tangent& x);
Tangent group_log(const GroupElement& g);

inline GroupElement compose(const GroupElement& a, const GroupElement& b) { return a * b; }
inline GroupElement inverse(const GroupElement& g) { return g.inverse(); }
inline Mat15 adjoint(const GroupElement& g) { return g.adjoint(); }

/// ad_G(x): the matrix of y -> [hat(x), hat(y)]^vee.
Mat15 ad_small(const Tangent& x);

/// J_r(x) = sum_k (-1)^k / (k+1)! ad(x)^k, truncated once a term's max-norm
/// drops below 1e-14 or after 30 terms.
Mat15 right_jacobian(const Tangent& x);

/// Left Jacobian through the series with alternating signs removed.
Mat15 left_jacobian(const Tangent& x);

}  // namespace lienav::lie
