#include "dustradar/point_model.hpp"

#include <array>
#include <sstream>

#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"

namespace dustradar {
namespace {

// Maps an angle difference into [-pi, pi] so that +pi and -pi compare equal.
double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a;
}

bool azimuth_in_range(double az) { return az >= -kPi && az <= kPi; }
bool elevation_in_range(double el) { return el >= -kPi / 2 && el <= kPi / 2; }

}  // namespace

std::string PointCheck::describe() const {
  std::ostringstream out;
  switch (violation) {
    case PointViolation::kNonFinite:
      out << "NonFinite(" << field << ")";
      break;
    case PointViolation::kAngleOutOfRange:
      out << "AngleOutOfRange(" << field << ")";
      break;
    case PointViolation::kAngularMismatch:
      out << "AngularMismatch(" << field << ": expected " << expected
          << ", actual " << actual << ", delta " << delta << ")";
      break;
  }
  return out.str();
}

std::optional<PointCheck> validate_point(const RadarPoint& p,
                                         double angle_tolerance) {
  const std::array<std::pair<const char*, double>, 7> fields{{
      {"x", p.x},
      {"y", p.y},
      {"z", p.z},
      {"rcs", p.rcs},
      {"v", p.v},
      {"azimuth", p.azimuth},
      {"elevation", p.elevation},
  }};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) {
      return PointCheck{PointViolation::kNonFinite, name};
    }
  }
  if (!azimuth_in_range(p.azimuth)) {
    return PointCheck{PointViolation::kAngleOutOfRange, "azimuth"};
  }
  if (!elevation_in_range(p.elevation)) {
    return PointCheck{PointViolation::kAngleOutOfRange, "elevation"};
  }

  // Angles carry no information at the origin (both) or on the z axis
  // (azimuth only), so they are unconstrained there.
  const double horizontal = std::hypot(p.x, p.y);
  if (horizontal > 0.0) {
    const double expected = std::atan2(p.y, p.x);
    const double delta = wrap_angle(p.azimuth - expected);
    if (std::abs(delta) > angle_tolerance) {
      return PointCheck{PointViolation::kAngularMismatch, "azimuth", expected,
                        p.azimuth, delta};
    }
  }
  if (horizontal > 0.0 || p.z != 0.0) {
    const double expected = std::atan2(p.z, horizontal);
    const double delta = p.elevation - expected;
    if (std::abs(delta) > angle_tolerance) {
      return PointCheck{PointViolation::kAngularMismatch, "elevation",
                        expected, p.elevation, delta};
    }
  }
  return std::nullopt;
}

RadarPoint from_spherical(double range, double azimuth, double elevation,
                          double rcs, double v) {
  if (!(range >= 0.0)) {
    throw Error(ErrorKind::kNegativeRange,
                "range must be >= 0, got " + format_number(range));
  }
  if (!azimuth_in_range(azimuth)) {
    throw Error(ErrorKind::kAngleOutOfRange,
                "azimuth outside [-pi, pi]: " + format_number(azimuth));
  }
  if (!elevation_in_range(elevation)) {
    throw Error(ErrorKind::kAngleOutOfRange,
                "elevation outside [-pi/2, pi/2]: " + format_number(elevation));
  }
  const double horizontal = range * std::cos(elevation);
  RadarPoint p;
  p.x = horizontal * std::cos(azimuth);
  p.y = horizontal * std::sin(azimuth);
  p.z = range * std::sin(elevation);
  p.rcs = rcs;
  p.v = v;
  p.azimuth = azimuth;
  p.elevation = elevation;
  return p;
}

RadarPoint from_cartesian(Vec3 position, double rcs, double v) {
  RadarPoint p;
  p.x = position.x;
  p.y = position.y;
  p.z = position.z;
  p.rcs = rcs;
  p.v = v;
  p.azimuth = std::atan2(position.y, position.x);
  p.elevation = std::atan2(position.z, std::hypot(position.x, position.y));
  return p;
}

}  // namespace dustradar
