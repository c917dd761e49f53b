#include "lienav/pipeline/rmse.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lienav/error.hpp"
#include "lienav/ins/earth.hpp"

namespace lienav::pipeline {

namespace {

// Wraps an angle difference in degrees into (-180, 180].
double wrap_deg(double d) {
  double w = std::fmod(d, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

}  // namespace

ChannelArray epoch_errors(const lie::GroupElement& est, const lie::GroupElement& truth) {
  constexpr double kToDeg = 180.0 / std::numbers::pi;
  const ins::Geodetic g = ins::geodetic_from_ecef(truth.pos());
  const lie::Mat3 c_ne = ins::ecef_from_ned(g.lat, g.lon);
  const Eigen::Vector3d e_true = ins::euler_from_dcm(c_ne.transpose() * truth.rot());
  const Eigen::Vector3d e_est = ins::euler_from_dcm(c_ne.transpose() * est.rot());
  const Eigen::Vector3d d_ned = c_ne.transpose() * (est.pos() - truth.pos());
  ChannelArray out{};
  for (int i = 0; i < 3; ++i) out[i] = wrap_deg((e_est[i] - e_true[i]) * kToDeg);
  out[3] = d_ned.y();
  out[4] = d_ned.x();
  out[5] = d_ned.z();
  return out;
}

void ErrorAccumulator::add(const lie::GroupElement& estimate, const lie::GroupElement& truth) {
  const ChannelArray e = epoch_errors(estimate, truth);
  for (std::size_t i = 0; i < kChannels; ++i) sum_sq_[i] += e[i] * e[i];
  ++count_;
}

void ErrorAccumulator::merge(const ErrorAccumulator& other) {
  for (std::size_t i = 0; i < kChannels; ++i) sum_sq_[i] += other.sum_sq_[i];
  count_ += other.count_;
}

ChannelArray ErrorAccumulator::rmse() const {
  ChannelArray out{};
  if (count_ == 0) return out;
  for (std::size_t i = 0; i < kChannels; ++i) {
    out[i] = std::sqrt(sum_sq_[i] / static_cast<double>(count_));
  }
  return out;
}

ChannelArray rmse(std::span<const lie::GroupElement> estimates,
                  std::span<const lie::GroupElement> truth) {
  if (estimates.size() != truth.size()) {
    throw Error(ErrorKind::kMisaligned, "rmse: " + std::to_string(estimates.size()) +
                                            " estimates vs " + std::to_string(truth.size()) +
                                            " truth epochs");
  }
  ErrorAccumulator acc;
  for (std::size_t k = 0; k < estimates.size(); ++k) acc.add(estimates[k], truth[k]);
  return acc.rmse();
}

std::string dominance_violations(const ChannelArray& filtered, const ChannelArray& smoothed) {
  std::string out;
  for (std::size_t i = 0; i < kChannels; ++i) {
    if (smoothed[i] > filtered[i]) {
      if (!out.empty()) out += ';';
      out += kChannelNames[i];
    }
  }
  return out.empty() ? "none" : out;
}

}  // namespace lienav::pipeline
