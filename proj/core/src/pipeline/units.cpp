#include "lienav/pipeline/units.hpp"

#include <array>
#include <numbers>
#include <utility>

#include "lienav/error.hpp"
#include "lienav/ins/earth.hpp"

namespace lienav::pipeline {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Entry {
  std::string_view text;
  Unit unit;
};

constexpr std::array kSpellings{
    Entry{"", Unit::kNone},
    Entry{"rad", Unit::kRad},
    Entry{"deg", Unit::kDeg},
    Entry{"°", Unit::kDeg},
    Entry{"m", Unit::kMeter},
    Entry{"s", Unit::kSecond},
    Entry{"Hz", Unit::kHertz},
    Entry{"m/s", Unit::kMeterPerSecond},
    Entry{"m/s^2", Unit::kMeterPerSecond2},
    Entry{"m/s2", Unit::kMeterPerSecond2},
    Entry{"rad/s", Unit::kRadPerSecond},
    Entry{"deg/s", Unit::kDegPerSecond},
    Entry{"°/s", Unit::kDegPerSecond},
    Entry{"deg/h", Unit::kDegPerHour},
    Entry{"°/h", Unit::kDegPerHour},
    Entry{"deg/sqrt(h)", Unit::kDegPerRootHour},
    Entry{"°/√h", Unit::kDegPerRootHour},
    Entry{"(m/s)/sqrt(h)", Unit::kMeterPerSecondPerRootHour},
    Entry{"(m/s)/√h", Unit::kMeterPerSecondPerRootHour},
    Entry{"g", Unit::kG},
    Entry{"mg", Unit::kMilliG},
    Entry{"ug", Unit::kMicroG},
    Entry{"µg", Unit::kMicroG},
    Entry{"μg", Unit::kMicroG},  // Greek mu
};

// Physical quantity of each unit; units of equal kind convert into each other.
int kind(Unit u) {
  switch (u) {
    case Unit::kNone: return 0;
    case Unit::kRad:
    case Unit::kDeg: return 1;
    case Unit::kMeter: return 2;
    case Unit::kSecond: return 3;
    case Unit::kHertz: return 4;
    case Unit::kMeterPerSecond: return 5;
    case Unit::kMeterPerSecond2:
    case Unit::kG:
    case Unit::kMilliG:
    case Unit::kMicroG: return 6;
    case Unit::kRadPerSecond:
    case Unit::kDegPerSecond:
    case Unit::kDegPerHour: return 7;
    case Unit::kDegPerRootHour: return 8;
    case Unit::kMeterPerSecondPerRootHour: return 9;
  }
  return -1;
}

double scale(Unit u) {
  switch (u) {
    case Unit::kDeg:
    case Unit::kDegPerSecond: return kDeg;
    case Unit::kDegPerHour: return kDeg / 3600.0;
    case Unit::kDegPerRootHour: return kDeg / 60.0;
    case Unit::kMeterPerSecondPerRootHour: return 1.0 / 60.0;
    case Unit::kG: return ins::kStandardGravity;
    case Unit::kMilliG: return 1e-3 * ins::kStandardGravity;
    case Unit::kMicroG: return 1e-6 * ins::kStandardGravity;
    default: return 1.0;
  }
}

}  // namespace

Unit parse_unit(std::string_view text) {
  for (const Entry& e : kSpellings) {
    if (e.text == text) return e.unit;
  }
  throw Error(ErrorKind::kParse, "unknown unit '" + std::string(text) + "'");
}

std::string_view unit_name(Unit u) {
  for (const Entry& e : kSpellings) {
    if (e.unit == u) return e.text;
  }
  return "?";
}

double to_si(double value, Unit u) { return value * scale(u); }
double from_si(double value, Unit u) { return value / scale(u); }

bool compatible(Unit u, Unit target) { return kind(u) == kind(target); }

}  // namespace lienav::pipeline
