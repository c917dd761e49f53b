#pragma once

// WGS-84 Earth model: constants, geodetic conversions, local-level frames and
// normal gravity.

#include <Eigen/Core>

namespace lienav::ins {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

namespace wgs84 {
inline constexpr double kSemiMajor = 6378137.0;                  // m
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kEccSq = kFlattening * (2.0 - kFlattening);
inline constexpr double kEarthRate = 7.292115e-5;                // rad/s
inline constexpr double kGammaEquator = 9.7803253359;            // m/s^2
inline constexpr double kSomiglianaK = 0.00193185265241;
inline constexpr double kFreeAirGradient = 3.086e-6;             // (m/s^2)/m
}  // namespace wgs84

/// Standard gravity used for unit conversions (g, mg, ug).
inline constexpr double kStandardGravity = 9.80665;

/// Geodetic latitude and longitude in radians, ellipsoidal height in metres.
struct Geodetic {
  double lat = 0.0;
  double lon = 0.0;
  double height = 0.0;
};

Vec3 ecef_from_geodetic(const Geodetic& g);
Geodetic geodetic_from_ecef(const Vec3& p);

/// Meridian (M) and prime-vertical (N) radii of curvature.
double meridian_radius(double lat);
double normal_radius(double lat);

/// Rotation taking NED coordinates at (lat, lon) into ECEF (C_n^e).
Mat3 ecef_from_ned(double lat, double lon);

/// Body-to-NED DCM from Z-Y-X Euler angles (roll, pitch, yaw).
Mat3 dcm_from_euler(double roll, double pitch, double yaw);
/// Z-Y-X Euler angles (roll, pitch, yaw) of a body-to-NED DCM.
Vec3 euler_from_dcm(const Mat3& c_b_n);

/// C_b^e for Euler angles relative to the NED frame at (lat, lon).
Mat3 attitude_ecef(const Vec3& euler, double lat, double lon);
/// Euler angles relative to NED at the geodetic position of p_e.
Vec3 euler_from_attitude_ecef(const Mat3& c_b_e, const Vec3& p_e);

/// (0, 0, omega_e).
Vec3 earth_rate_ecef();

/// Somigliana normal gravity magnitude with a linear free-air correction.
double normal_gravity(double lat, double height);

/// Plumb-bob gravity (gravitation plus centrifugal) in ECEF.
/// Throws ErrorKind::kInvalidPosition for |p| <= 6.2e6 m.
Vec3 gravity_ecef(const Vec3& p_e);

/// d gravity_ecef / d p_e.
Mat3 gravity_gradient_ecef(const Vec3& p_e);

}  // namespace lienav::ins
