#include "lienav/lie/so3.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "lienav/error.hpp"

namespace lienav {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kOutOfChart: return "out of chart";
    case ErrorKind::kNotPositiveDefinite: return "covariance not positive definite";
    case ErrorKind::kInvalidPosition: return "invalid position";
    case ErrorKind::kSingularInnovation: return "singular innovation covariance";
    case ErrorKind::kSmootherGain: return "smoother gain";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kAlignmentImpossible: return "alignment impossible";
    case ErrorKind::kNotStationary: return "not stationary";
    case ErrorKind::kInsufficientFixes: return "insufficient GNSS fixes";
    case ErrorKind::kNonConvexFit: return "non-convex fit";
    case ErrorKind::kUnstableStep: return "unstable step";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kMisaligned: return "misaligned inputs";
    case ErrorKind::kDivergence: return "divergence";
  }
  return "unknown";
}

namespace lie {

namespace {
// Below this angle the Jacobian coefficients suffer cancellation; their
// series are exact to double precision here.
constexpr double kSeriesAngle = 1e-3;
}  // namespace

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat3 so3_exp(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 k = skew(phi);
  double a;  // sin(t)/t
  double b;  // (1 - cos(t))/t^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    const double half = std::sin(0.5 * theta);
    a = std::sin(theta) / theta;
    b = 2.0 * half * half / theta2;
  }
  return Mat3::Identity() + a * k + b * k * k;
}

double rotation_angle(const Mat3& rot) {
  const Vec3 w(rot(2, 1) - rot(1, 2), rot(0, 2) - rot(2, 0), rot(1, 0) - rot(0, 1));
  return std::atan2(0.5 * w.norm(), 0.5 * (rot.trace() - 1.0));
}

Vec3 so3_log(const Mat3& rot) {
  const double theta = rotation_angle(rot);
  if (theta >= std::numbers::pi - kChartMargin) {
    throw Error(ErrorKind::kOutOfChart,
                "so3_log: rotation angle " + std::to_string(theta) + " rad leaves the chart");
  }
  const Vec3 w(rot(2, 1) - rot(1, 2), rot(0, 2) - rot(2, 0), rot(1, 0) - rot(0, 1));
  if (theta < kSmallAngle) {
    return 0.5 * (1.0 + theta * theta / 6.0) * w;
  }
  if (theta < 3.0) {
    return 0.5 * theta / std::sin(theta) * w;
  }
  // Near pi: axis from the symmetric part, sign from the skew part.
  const double c = std::cos(theta);
  const Mat3 aat = (0.5 * (rot + rot.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  Eigen::Index i = 0;
  aat.diagonal().maxCoeff(&i);
  Vec3 axis = aat.col(i) / std::sqrt(aat(i, i));
  if (axis.dot(w) < 0.0) axis = -axis;
  return theta * axis.normalized();
}

Mat3 so3_left_jacobian(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 k = skew(phi);
  double b;  // (1 - cos t)/t^2
  double c;  // (t - sin t)/t^3
  if (theta < kSeriesAngle) {
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    c = 1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0;
  } else {
    const double half = std::sin(0.5 * theta);
    b = 2.0 * half * half / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }
  return Mat3::Identity() + b * k + c * k * k;
}

Mat3 so3_left_jacobian_inverse(const Vec3& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 k = skew(phi);
  double d;
  if (theta < kSeriesAngle) {
    d = 1.0 / 12.0 + theta2 / 720.0 + theta2 * theta2 / 30240.0;
  } else {
    // 1/t^2 - (1 + cos t)/(2 t sin t), written with cot(t/2)
    d = 1.0 / theta2 - 0.5 / (theta * std::tan(0.5 * theta));
  }
  return Mat3::Identity() - 0.5 * k + d * k * k;
}

Mat3 orthonormalize(const Mat3& rot) {
  Eigen::JacobiSVD<Mat3> svd(rot, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  if ((u * svd.matrixV().transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * svd.matrixV().transpose();
}

double orthonormality_error(const Mat3& rot) {
  return (rot.transpose() * rot - Mat3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace lie
}  // namespace lienav
