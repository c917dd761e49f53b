#pragma once

// ECEF strapdown model written as a left-invariant system on G:
// X_{k+1} = X_k exp(Omega(X_k, u_k) dt).

#include <Eigen/Core>

#include "lienav/ins/earth.hpp"
#include "lienav/ins/types.hpp"
#include "lienav/lie/group.hpp"

namespace lienav::ins {

using lie::GroupElement;
using lie::Mat15;
using lie::Tangent;
using Mat3x15 = Eigen::Matrix<double, 3, lie::kDim>;

Tangent omega_fn(const GroupElement& x, const ImuSample& u);

/// d/d eps Omega(x exp(eps), u) at eps = 0.
Mat15 jacobian_C(const GroupElement& x, const ImuSample& u);

/// Gamma Gamma^T dt. Throws ErrorKind::kInvalidArgument for dt <= 0 or
/// negative parameters.
Mat15 process_noise_Q(const ImuNoiseParams& params, double dt);

/// Antenna position p + C l.
Vec3 measurement_h(const GroupElement& x, const LeverArm& lever);

/// d/d eps h(x exp(eps)) at eps = 0.
Mat3x15 jacobian_H(const GroupElement& x, const LeverArm& lever);

/// One step of the discrete model.
inline GroupElement propagate(const GroupElement& x, const ImuSample& u, double dt) {
  return x * lie::group_exp(omega_fn(x, u) * dt);
}

}  // namespace lienav::ins
