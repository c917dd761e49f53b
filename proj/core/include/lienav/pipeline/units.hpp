#pragma once

#include <string>
#include <string_view>

namespace lienav::pipeline {

/// Physical units accepted in configuration files and CSV headers.
enum class Unit {
  kNone,
  kRad,
  kDeg,
  kMeter,
  kSecond,
  kHertz,
  kMeterPerSecond,
  kMeterPerSecond2,
  kRadPerSecond,
  kDegPerSecond,
  kDegPerHour,
  kDegPerRootHour,
  kMeterPerSecondPerRootHour,
  kG,
  kMilliG,
  kMicroG,
};

/// Parses a unit string. Accepts the ASCII spellings (deg/h, deg/sqrt(h),
/// (m/s)/sqrt(h), ug, m/s^2, ...) and their symbol forms (°/h, °/√h, µg).
/// Throws kParse for anything else.
Unit parse_unit(std::string_view text);
std::string_view unit_name(Unit u);

/// Converts a value in `u` into SI: rad, m, s, Hz, m/s, m/s^2, rad/s,
/// rad/s/sqrt(Hz), m/s^2/sqrt(Hz), m/s^2 for g-multiples.
double to_si(double value, Unit u);
double from_si(double value, Unit u);

/// True when values in `u` can stand for the physical quantity of `target`
/// (for example deg/s for rad/s).
bool compatible(Unit u, Unit target);

}  // namespace lienav::pipeline
