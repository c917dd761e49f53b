#include "lienav/ins/earth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lienav/error.hpp"

namespace lienav::ins {

namespace {

constexpr double kMinRadius = 6.2e6;

void check_position(const Vec3& p) {
  if (!p.allFinite() || p.norm() <= kMinRadius) {
    throw Error(ErrorKind::kInvalidPosition,
                "gravity model: position radius " + std::to_string(p.norm()) +
                    " m is not above the Earth surface regime");
  }
}

// d gamma / d lat
double normal_gravity_dlat(double lat) {
  const double s = std::sin(lat);
  const double c = std::cos(lat);
  const double w = 1.0 - wgs84::kEccSq * s * s;
  const double root = std::sqrt(w);
  const double ds = wgs84::kGammaEquator *
                    (2.0 * wgs84::kSomiglianaK * s / root +
                     (1.0 + wgs84::kSomiglianaK * s * s) * wgs84::kEccSq * s / (w * root));
  return ds * c;
}

}  // namespace

double normal_radius(double lat) {
  const double s = std::sin(lat);
  return wgs84::kSemiMajor / std::sqrt(1.0 - wgs84::kEccSq * s * s);
}

double meridian_radius(double lat) {
  const double s = std::sin(lat);
  const double w = 1.0 - wgs84::kEccSq * s * s;
  return wgs84::kSemiMajor * (1.0 - wgs84::kEccSq) / (w * std::sqrt(w));
}

Vec3 ecef_from_geodetic(const Geodetic& g) {
  const double n = normal_radius(g.lat);
  const double cl = std::cos(g.lat);
  return {(n + g.height) * cl * std::cos(g.lon), (n + g.height) * cl * std::sin(g.lon),
          (n * (1.0 - wgs84::kEccSq) + g.height) * std::sin(g.lat)};
}

Geodetic geodetic_from_ecef(const Vec3& p) {
  Geodetic g;
  g.lon = std::atan2(p.y(), p.x());
  const double rho = std::hypot(p.x(), p.y());
  // Fixed-point iteration on latitude; converges to machine precision in a
  // handful of steps for terrestrial and aerial heights.
  double lat = std::atan2(p.z(), rho * (1.0 - wgs84::kEccSq));
  for (int i = 0; i < 10; ++i) {
    const double n = normal_radius(lat);
    const double next = std::atan2(p.z() + wgs84::kEccSq * n * std::sin(lat), rho);
    const bool done = std::abs(next - lat) < 1e-15;
    lat = next;
    if (done) break;
  }
  g.lat = lat;
  const double cl = std::cos(lat);
  const double sl = std::sin(lat);
  // Height via the projection onto the ellipsoid normal; stable at all latitudes.
  g.height = rho * cl + p.z() * sl - wgs84::kSemiMajor * std::sqrt(1.0 - wgs84::kEccSq * sl * sl);
  return g;
}

Mat3 ecef_from_ned(double lat, double lon) {
  const double sl = std::sin(lat);
  const double cl = std::cos(lat);
  const double so = std::sin(lon);
  const double co = std::cos(lon);
  Mat3 c;
  c << -sl * co, -so, -cl * co,
       -sl * so, co, -cl * so,
       cl, 0.0, -sl;
  return c;
}

Mat3 dcm_from_euler(double roll, double pitch, double yaw) {
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double sp = std::sin(pitch), cp = std::cos(pitch);
  const double sy = std::sin(yaw), cy = std::cos(yaw);
  Mat3 c;
  c << cp * cy, -cr * sy + sr * sp * cy, sr * sy + cr * sp * cy,
       cp * sy, cr * cy + sr * sp * sy, -sr * cy + cr * sp * sy,
       -sp, sr * cp, cr * cp;
  return c;
}

Vec3 euler_from_dcm(const Mat3& c) {
  const double pitch = -std::asin(std::clamp(c(2, 0), -1.0, 1.0));
  const double roll = std::atan2(c(2, 1), c(2, 2));
  const double yaw = std::atan2(c(1, 0), c(0, 0));
  return {roll, pitch, yaw};
}

Mat3 attitude_ecef(const Vec3& euler, double lat, double lon) {
  return ecef_from_ned(lat, lon) * dcm_from_euler(euler.x(), euler.y(), euler.z());
}

Vec3 euler_from_attitude_ecef(const Mat3& c_b_e, const Vec3& p_e) {
  const Geodetic g = geodetic_from_ecef(p_e);
  return euler_from_dcm(ecef_from_ned(g.lat, g.lon).transpose() * c_b_e);
}

Vec3 earth_rate_ecef() { return {0.0, 0.0, wgs84::kEarthRate}; }

double normal_gravity(double lat, double height) {
  const double s = std::sin(lat);
  const double gamma = wgs84::kGammaEquator * (1.0 + wgs84::kSomiglianaK * s * s) /
                       std::sqrt(1.0 - wgs84::kEccSq * s * s);
  return gamma - wgs84::kFreeAirGradient * height;
}

Vec3 gravity_ecef(const Vec3& p_e) {
  check_position(p_e);
  const Geodetic g = geodetic_from_ecef(p_e);
  const double cl = std::cos(g.lat);
  const Vec3 up(cl * std::cos(g.lon), cl * std::sin(g.lon), std::sin(g.lat));
  return -normal_gravity(g.lat, g.height) * up;
}

Mat3 gravity_gradient_ecef(const Vec3& p_e) {
  check_position(p_e);
  const Geodetic g = geodetic_from_ecef(p_e);
  const double sl = std::sin(g.lat), cl = std::cos(g.lat);
  const double so = std::sin(g.lon), co = std::cos(g.lon);
  const Vec3 up(cl * co, cl * so, sl);
  const Vec3 north(-sl * co, -sl * so, cl);
  const Vec3 east(-so, co, 0.0);
  const double m_h = meridian_radius(g.lat) + g.height;
  const double n_h = normal_radius(g.lat) + g.height;
  const double mag = normal_gravity(g.lat, g.height);
  const double dmag_dlat = normal_gravity_dlat(g.lat);
  const double dmag_dh = -wgs84::kFreeAirGradient;
  // g = -mag(lat, h) * up(lat, lon); d lat = north.dp/(M+h), d lon = east.dp/((N+h) cos lat),
  // d h = up.dp.
  const Eigen::RowVector3d dmag = (dmag_dlat / m_h) * north.transpose() + dmag_dh * up.transpose();
  return -up * dmag - mag * (north * north.transpose() / m_h + east * east.transpose() / n_h);
}

}  // namespace lienav::ins
