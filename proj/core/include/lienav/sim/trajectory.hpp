#pragma once

// Parametric reference flights and the inverse strapdown mechanization that
// recovers the ideal IMU signals reproducing them.

#include <string>
#include <string_view>
#include <vector>

#include "lienav/ins/earth.hpp"
#include "lienav/ins/types.hpp"
#include "lienav/lie/group.hpp"

namespace lienav::sim {

using ins::ImuSample;
using lie::GroupElement;
using Vec3 = Eigen::Vector3d;

enum class Profile { kHelicoidal, kRectangular, kCircular };

Profile parse_profile(std::string_view name);
std::string_view to_string(Profile p);

struct ProfileParams {
  ins::Geodetic origin{45.0 * 0.017453292519943295, 7.0 * 0.017453292519943295, 300.0};
  double static_s = 30.0;      // stationary prefix
  double flight_s = 120.0;     // duration after take-off
  double speed = 5.0;          // m/s cruise ground speed
  double ramp_s = 5.0;         // speed ramp-up time
  double heading0 = 0.0;       // rad, initial heading
  double bank_gain = 1.0;      // 1 = coordinated turn
  // circular and helicoidal
  double radius = 100.0;       // m
  double climb_rate = 1.0;     // m/s, helicoidal only
  // rectangular
  double side_a = 150.0;       // m, first straight
  double side_b = 80.0;        // m
  double corner_radius = 20.0; // m
  double corner_ramp = 10.0;   // m of arc over which curvature ramps in/out
};

struct ReferenceTrajectory {
  double rate = 200.0;
  Profile profile = Profile::kCircular;
  ProfileParams params;
  std::vector<double> t;
  std::vector<GroupElement> states;  // C_b^e, v^e, p^e; zero biases
};

/// Throws kInvalidArgument for rate < 50 Hz, static_s + flight_s < 60 s or
/// non-positive geometry.
ReferenceTrajectory make_reference(Profile profile, const ProfileParams& params = {},
                                   double rate = 200.0);

/// Ideal IMU samples; sample k drives the interval [t_k, t_k+1], so the
/// result has one fewer element than the trajectory.
std::vector<ImuSample> inverse_mechanization(const ReferenceTrajectory& ref);

}  // namespace lienav::sim
