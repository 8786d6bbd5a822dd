#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace dustradar {

// Sensor frame: x forward along boresight, y left, z up. Azimuth is measured
// in the x-y plane from +x toward +y, elevation from the x-y plane toward +z.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// One radar detection. rcs in dBsm, v is the signed radial velocity in m/s
// (positive = receding), angles in radians.
struct RadarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double rcs = 0.0;
  double v = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;

  Vec3 position() const { return {x, y, z}; }
  double range() const { return std::sqrt(x * x + y * y + z * z); }

  friend bool operator==(const RadarPoint&, const RadarPoint&) = default;
};

// Point order is the identity used by every later stage: index i in
// `points` names the same detection in filter reports, clusterings and
// ground-truth labels.
struct Frame {
  std::uint64_t seq = 0;
  double timestamp = 0.0;
  std::vector<RadarPoint> points;

  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Angular consistency tolerances.
inline constexpr double kIngestAngleTolerance = 1e-4;
inline constexpr double kSimulatorAngleTolerance = 1e-9;

enum class PointViolation { kNonFinite, kAngleOutOfRange, kAngularMismatch };

struct PointCheck {
  PointViolation violation;
  std::string field;
  // Populated for kAngularMismatch.
  double expected = 0.0;
  double actual = 0.0;
  double delta = 0.0;

  std::string describe() const;
};

// Empty optional = accepted. Otherwise the first violated invariant, checked
// in the order: finiteness, angle ranges, angular consistency.
std::optional<PointCheck> validate_point(const RadarPoint& p,
                                         double angle_tolerance);

// Builds a point from spherical coordinates. Throws Error(kNegativeRange) or
// Error(kAngleOutOfRange).
RadarPoint from_spherical(double range, double azimuth, double elevation,
                          double rcs, double v);

// Builds a point from a Cartesian position with angles derived by atan2.
RadarPoint from_cartesian(Vec3 position, double rcs, double v);

}  // namespace dustradar
