#include "lienav/sim/trajectory.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "lienav/error.hpp"

namespace lienav::sim {

namespace {

using std::numbers::pi;

// Smoothstep and its integral, both on [0, 1].
double smooth(double x) { return x * x * (3.0 - 2.0 * x); }
double smooth_integral(double x) { return x * x * x * (1.0 - 0.5 * x); }

// Heading and curvature as functions of arc length along the horizontal path.
class Path {
 public:
  Path(Profile profile, const ProfileParams& p) : profile_(profile), p_(p) {
    if (profile_ == Profile::kRectangular) {
      kappa_ = 1.0 / p.corner_radius;
      corner_mid_ = 0.5 * pi * p.corner_radius - p.corner_ramp;
      if (!(corner_mid_ > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "make_reference: corner ramp longer than the quarter turn allows");
      }
      corner_len_ = 2.0 * p.corner_ramp + corner_mid_;
      lap_ = 2.0 * (p.side_a + p.side_b + 2.0 * corner_len_);
    } else {
      kappa_ = 1.0 / p.radius;
    }
  }

  // (heading, curvature) at arc length s.
  std::array<double, 2> at(double s) const {
    if (profile_ != Profile::kRectangular) return {p_.heading0 + kappa_ * s, kappa_};
    const double laps = std::floor(s / lap_);
    double u = s - laps * lap_;
    double heading = p_.heading0 + laps * 2.0 * pi;
    const std::array<double, 2> sides{p_.side_a, p_.side_b};
    for (int leg = 0; leg < 4; ++leg) {
      const double side = sides[leg % 2];
      if (u < side) return {heading, 0.0};
      u -= side;
      if (u < corner_len_) {
        const auto [dh, k] = corner(u);
        return {heading + dh, k};
      }
      u -= corner_len_;
      heading += 0.5 * pi;
    }
    return {heading, 0.0};
  }

 private:
  std::array<double, 2> corner(double u) const {
    const double ramp = p_.corner_ramp;
    if (u < ramp) {
      const double x = u / ramp;
      return {kappa_ * ramp * smooth_integral(x), kappa_ * smooth(x)};
    }
    if (u < ramp + corner_mid_) {
      return {kappa_ * (0.5 * ramp + (u - ramp)), kappa_};
    }
    const double x = (corner_len_ - u) / ramp;
    return {0.5 * pi - kappa_ * ramp * smooth_integral(x), kappa_ * smooth(x)};
  }

  Profile profile_;
  ProfileParams p_;
  double kappa_ = 0.0;
  double corner_mid_ = 0.0;
  double corner_len_ = 0.0;
  double lap_ = 0.0;
};

// Distance (or climb) and its rate for a smoothstep ramp to `rate` over ramp_s.
std::array<double, 2> ramped(double t_flight, double rate, double ramp_s) {
  if (t_flight <= 0.0) return {0.0, 0.0};
  if (t_flight < ramp_s) {
    const double x = t_flight / ramp_s;
    return {rate * ramp_s * smooth_integral(x), rate * smooth(x)};
  }
  return {rate * (0.5 * ramp_s + (t_flight - ramp_s)), rate};
}

// Five-point Gauss-Legendre integral of (cos h, sin h) over [s0, s1].
Eigen::Vector2d advance(const Path& path, double s0, double s1) {
  static constexpr std::array<double, 5> kNode{0.0, -0.5384693101056831, 0.5384693101056831,
                                               -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> kWeight{0.5688888888888889, 0.4786286704993665,
                                                 0.4786286704993665, 0.2369268850561891,
                                                 0.2369268850561891};
  const double half = 0.5 * (s1 - s0);
  const double mid = 0.5 * (s1 + s0);
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < kNode.size(); ++i) {
    const double h = path.at(mid + half * kNode[i])[0];
    sum += kWeight[i] * Eigen::Vector2d(std::cos(h), std::sin(h));
  }
  return half * sum;
}

}  // namespace

Profile parse_profile(std::string_view name) {
  if (name == "helicoidal") return Profile::kHelicoidal;
  if (name == "rectangular") return Profile::kRectangular;
  if (name == "circular") return Profile::kCircular;
  throw Error(ErrorKind::kInvalidArgument, "unknown profile '" + std::string(name) + "'");
}

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::kHelicoidal: return "helicoidal";
    case Profile::kRectangular: return "rectangular";
    case Profile::kCircular: return "circular";
  }
  return "unknown";
}

ReferenceTrajectory make_reference(Profile profile, const ProfileParams& params, double rate) {
  if (!(rate >= 50.0)) throw Error(ErrorKind::kInvalidArgument, "make_reference: rate must be >= 50 Hz");
  if (!(params.static_s >= 0.0) || !(params.flight_s >= 0.0) ||
      params.static_s + params.flight_s < 60.0) {
    throw Error(ErrorKind::kInvalidArgument, "make_reference: duration must be at least 60 s");
  }
  if (!(params.speed >= 0.0) || !(params.ramp_s > 0.0) || !(params.radius > 0.0) ||
      !(params.corner_radius > 0.0) || !(params.corner_ramp > 0.0) || !(params.side_a >= 0.0) ||
      !(params.side_b >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "make_reference: invalid profile geometry");
  }
  const Path path(profile, params);
  const auto n = static_cast<std::size_t>(std::llround((params.static_s + params.flight_s) * rate));

  const Vec3 p0 = ins::ecef_from_geodetic(params.origin);
  const lie::Mat3 c_ne = ins::ecef_from_ned(params.origin.lat, params.origin.lon);

  // Poses for epochs 0..n+1; the extra one closes the last velocity.
  std::vector<lie::Mat3> rot(n + 2);
  std::vector<Vec3> pos(n + 2);
  Eigen::Vector2d horizontal = Eigen::Vector2d::Zero();
  double s_prev = 0.0;
  for (std::size_t k = 0; k < n + 2; ++k) {
    const double t = static_cast<double>(k) / rate;
    const double tf = t - params.static_s;
    const auto [s, speed] = ramped(tf, params.speed, params.ramp_s);
    const double climb = profile == Profile::kHelicoidal
                             ? ramped(tf, params.climb_rate, params.ramp_s)[0]
                             : 0.0;
    if (s > s_prev) horizontal += advance(path, s_prev, s);
    s_prev = s;
    const auto [heading, kappa] = path.at(s);
    const double bank = std::atan(params.bank_gain * speed * speed * kappa / ins::kStandardGravity);
    rot[k] = c_ne * ins::dcm_from_euler(bank, 0.0, heading);
    pos[k] = p0 + c_ne * Vec3(horizontal.x(), horizontal.y(), -climb);
  }

  ReferenceTrajectory ref;
  ref.rate = rate;
  ref.profile = profile;
  ref.params = params;
  ref.t.resize(n + 1);
  ref.states.resize(n + 1);
  // Velocity chosen so that one exp step of the strapdown model maps p_k
  // exactly onto p_k+1.
  for (std::size_t k = 0; k <= n; ++k) {
    ref.t[k] = static_cast<double>(k) / rate;
    const double dt = static_cast<double>(k + 1) / rate - ref.t[k];
    const Vec3 phi = lie::so3_log(rot[k].transpose() * rot[k + 1]);
    const Vec3 vel = rot[k] * lie::so3_left_jacobian_inverse(phi) * rot[k].transpose() *
                     (pos[k + 1] - pos[k]) / dt;
    ref.states[k] = GroupElement(rot[k], vel, pos[k], lie::Vec6::Zero());
  }
  return ref;
}

std::vector<ImuSample> inverse_mechanization(const ReferenceTrajectory& ref) {
  const std::size_t n = ref.states.size();
  if (n < 2) return {};
  const Vec3 w_ie = ins::earth_rate_ecef();
  std::vector<ImuSample> out(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const GroupElement& s = ref.states[k];
    const double dt = ref.t[k + 1] - ref.t[k];
    const lie::Tangent omega = lie::group_log(s.inverse() * ref.states[k + 1]) / dt;
    const lie::Mat3 ct = s.rot().transpose();
    out[k].t = ref.t[k];
    out[k].gyro = omega.segment<3>(lie::slot::kPhi) + ct * w_ie;
    out[k].accel = omega.segment<3>(lie::slot::kNu) + 2.0 * ct * w_ie.cross(s.vel()) -
                   ct * ins::gravity_ecef(s.pos());
  }
  return out;
}

}  // namespace lienav::sim
