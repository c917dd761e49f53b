#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "lienav/lie/group.hpp"

namespace lienav::pipeline {

/// Error channels: roll, pitch, heading (deg) and east, north, down position
/// error at the true position (m), reported as Longitude, Latitude, Altitude.
inline constexpr std::size_t kChannels = 6;
using ChannelArray = std::array<double, kChannels>;
inline constexpr std::array<std::string_view, kChannels> kChannelNames{
    "roll_deg", "pitch_deg", "heading_deg", "longitude_m", "latitude_m", "altitude_m"};

/// Per-channel signed errors of one epoch; Euler differences wrapped to
/// (-180, 180].
ChannelArray epoch_errors(const lie::GroupElement& estimate, const lie::GroupElement& truth);

class ErrorAccumulator {
 public:
  void add(const lie::GroupElement& estimate, const lie::GroupElement& truth);
  void merge(const ErrorAccumulator& other);
  ChannelArray rmse() const;
  std::size_t count() const { return count_; }

 private:
  ChannelArray sum_sq_{};
  std::size_t count_ = 0;
};

/// Names of channels where smoothed RMSE exceeds filtered RMSE, joined by
/// ';', or "none".
std::string dominance_violations(const ChannelArray& filtered, const ChannelArray& smoothed);

/// Throws kMisaligned if the sequences differ in length.
ChannelArray rmse(std::span<const lie::GroupElement> estimates,
                  std::span<const lie::GroupElement> truth);

}  // namespace lienav::pipeline
