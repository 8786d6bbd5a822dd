#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "dustradar/point_model.hpp"
#include "dustradar/random.hpp"

namespace dustradar {

enum class RoomPlane { kFloor, kCeiling, kLeftWall, kRightWall, kNearWall, kFarWall };

std::string_view to_string(RoomPlane plane);
std::optional<RoomPlane> parse_room_plane(std::string_view text);

// Plane {p : dot(normal, p) == offset} with a unit normal, in sensor frame.
struct Plane {
  Vec3 normal;
  double offset = 0.0;
};

Vec3 reflect_point(Vec3 p, const Plane& plane);
Vec3 reflect_direction(Vec3 d, const Plane& plane);

// Axis-aligned box. The sensor sits on the near wall (x = 0) at
// `sensor_height` above the floor and `sensor_lateral` left of the room's
// center line, looking along +x. In sensor frame the room spans
// x in [0, length], y in [-width/2 - lateral, width/2 - lateral],
// z in [-sensor_height, height - sensor_height].
struct Room {
  double length = 16.2;
  double width = 3.0;
  double height = 3.4;
  double sensor_height = 1.0;
  double sensor_lateral = 0.0;

  Vec3 min_corner() const;
  Vec3 max_corner() const;
  Plane plane(RoomPlane which) const;
  double area(RoomPlane which) const;
};

struct ReflectivePlane {
  RoomPlane plane = RoomPlane::kCeiling;
  double gain_db = 0.0;
};

struct SensorModel {
  double fov_azimuth = deg_to_rad(60.0);    // half-angle
  double fov_elevation = deg_to_rad(20.0);  // half-angle
  double max_range = 20.0;
  double velocity_jitter = 0.05;            // uniform bound, m/s
};

// Walks the closed polygon through `waypoints` (ground-plane x, y in sensor
// frame) at constant speed, starting at the first waypoint. Two waypoints
// give a back-and-forth walk.
struct PedestrianSpec {
  std::vector<std::array<double, 2>> waypoints;
  double speed = 1.0;
  double height = 1.7;
  double radius = 0.25;
  std::size_t points_per_frame = 40;
  double rcs_mean = -5.0;
  double rcs_sigma = 3.0;
};

struct DustSpec {
  int level = 0;
  // Points per frame for each level; must be non-decreasing.
  std::vector<std::size_t> rates{0, 200, 600, 1500, 3000};
  double rcs_mean = -45.0;
  double rcs_sigma = 2.0;
  double max_abs_velocity = 0.1;
  // When set, frame k uses level floor(k * (level + 1) / frame_count), so a
  // stream ramps from 0 up to `level`.
  bool escalate = false;

  std::size_t rate(int lvl) const;
};

struct GhostSpec {
  bool enabled = true;
  std::vector<RoomPlane> planes{RoomPlane::kCeiling};
  double rcs_inflation_db = 15.0;
};

struct StructureSpec {
  bool enabled = true;
  std::size_t points_per_frame = 300;
  double rcs_mean = 20.0;
  double rcs_sigma = 4.0;
  std::vector<RoomPlane> surfaces{RoomPlane::kLeftWall, RoomPlane::kRightWall,
                                  RoomPlane::kCeiling, RoomPlane::kFarWall};
};

struct SceneSpec {
  Room room;
  std::vector<ReflectivePlane> reflective_planes;
  SensorModel sensor;
  std::vector<PedestrianSpec> pedestrians;
  DustSpec dust;
  GhostSpec ghost;
  StructureSpec structure;
  double frame_rate = 10.0;
  std::size_t frame_count = 1;
  std::uint64_t rng_seed = 1;

  // Throws Error(kInvalidSpec, detail).
  void validate() const;
  // Gain of a reflective plane; nullopt if the plane is not reflective.
  std::optional<double> plane_gain(RoomPlane plane) const;
};

enum class PointSource { kPedestrian, kGhost, kDust, kStructure };

struct PointLabel {
  PointSource source = PointSource::kDust;
  int pedestrian_id = -1;  // set for kPedestrian

  friend bool operator==(const PointLabel&, const PointLabel&) = default;
};

struct TruePedestrian {
  int id = 0;
  Vec3 position;  // body center

  friend bool operator==(const TruePedestrian&, const TruePedestrian&) = default;
};

struct GroundTruth {
  std::uint64_t seq = 0;
  int dust_level = 0;
  std::vector<PointLabel> labels;            // one per frame point
  std::vector<TruePedestrian> pedestrians;   // those inside the sensor FOV

  std::size_t true_count() const { return pedestrians.size(); }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct SimFrame {
  Frame frame;
  GroundTruth truth;
};

// Mirror image of `point` across `plane`: reflected position, rcs + gain_db,
// angles recomputed from the new position. |v| is kept; its sign follows the
// reflected line-of-sight velocity vector.
RadarPoint mirror_ghost(const RadarPoint& point, const Plane& plane,
                        double gain_db);

// Sequential generator; walker positions advance with the frame index. One
// Rng per stream, seeded from the scene spec.
class SceneSimulator {
 public:
  explicit SceneSimulator(SceneSpec spec);

  bool done() const { return next_seq_ >= spec_.frame_count; }
  SimFrame next();

  const SceneSpec& spec() const { return spec_; }
  int dust_level_at(std::uint64_t seq) const;

 private:
  struct BodyState {
    Vec3 foot;      // ground contact point under the body center
    Vec3 velocity;  // walking velocity
  };

  BodyState walker_state(const PedestrianSpec& ped, double t) const;
  void add_pedestrian(const PedestrianSpec& ped, int id, const BodyState& s,
                      SimFrame& out);
  void add_dust(int level, SimFrame& out);
  void add_structure(SimFrame& out);

  SceneSpec spec_;
  Rng rng_;
  std::uint64_t next_seq_ = 0;
};

std::vector<SimFrame> simulate(const SceneSpec& spec);

}  // namespace dustradar
