#pragma once

#include <Eigen/Core>

namespace lienav::lie {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Below this rotation angle the Rodrigues / Jacobian coefficients switch to
/// their second-order Taylor expansions.
inline constexpr double kSmallAngle = 1e-7;

/// Logarithms are refused once the rotation angle reaches pi - kChartMargin.
inline constexpr double kChartMargin = 1e-6;

/// Orthonormality tolerance for direction-cosine matrices.
inline constexpr double kOrthoTolerance = 1e-9;

Mat3 skew(const Vec3& v);

Mat3 so3_exp(const Vec3& phi);

/// Rotation vector of R. Throws ErrorKind::kOutOfChart when the rotation
/// angle is >= pi - kChartMargin.
Vec3 so3_log(const Mat3& rot);

/// Rotation angle in [0, pi], computed with atan2 for accuracy at both ends.
double rotation_angle(const Mat3& rot);

/// SO(3) left Jacobian and its inverse.
Mat3 so3_left_jacobian(const Vec3& phi);
Mat3 so3_left_jacobian_inverse(const Vec3& phi);

/// Nearest rotation matrix (polar decomposition).
Mat3 orthonormalize(const Mat3& rot);

/// max |R^T R - I|
double orthonormality_error(const Mat3& rot);

}  // namespace lienav::lie
