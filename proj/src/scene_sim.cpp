#include "dustradar/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dustradar/error.hpp"

namespace dustradar {
namespace {

void require(bool ok, const std::string& detail) {
  if (!ok) throw Error(ErrorKind::kInvalidSpec, "scene: " + detail);
}

Vec3 unit_or_zero(Vec3 v) {
  const double n = norm(v);
  return n > 0.0 ? (1.0 / n) * v : Vec3{};
}

}  // namespace

std::string_view to_string(RoomPlane plane) {
  switch (plane) {
    case RoomPlane::kFloor: return "floor";
    case RoomPlane::kCeiling: return "ceiling";
    case RoomPlane::kLeftWall: return "left_wall";
    case RoomPlane::kRightWall: return "right_wall";
    case RoomPlane::kNearWall: return "near_wall";
    case RoomPlane::kFarWall: return "far_wall";
  }
  return "unknown";
}

std::optional<RoomPlane> parse_room_plane(std::string_view text) {
  for (RoomPlane p : {RoomPlane::kFloor, RoomPlane::kCeiling,
                      RoomPlane::kLeftWall, RoomPlane::kRightWall,
                      RoomPlane::kNearWall, RoomPlane::kFarWall}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

Vec3 reflect_point(Vec3 p, const Plane& plane) {
  const double signed_dist = dot(plane.normal, p) - plane.offset;
  return p - (2.0 * signed_dist) * plane.normal;
}

Vec3 reflect_direction(Vec3 d, const Plane& plane) {
  return d - (2.0 * dot(plane.normal, d)) * plane.normal;
}

Vec3 Room::min_corner() const {
  return {0.0, -width / 2 - sensor_lateral, -sensor_height};
}

Vec3 Room::max_corner() const {
  return {length, width / 2 - sensor_lateral, height - sensor_height};
}

Plane Room::plane(RoomPlane which) const {
  const Vec3 lo = min_corner();
  const Vec3 hi = max_corner();
  switch (which) {
    case RoomPlane::kFloor: return {{0, 0, 1}, lo.z};
    case RoomPlane::kCeiling: return {{0, 0, 1}, hi.z};
    case RoomPlane::kLeftWall: return {{0, 1, 0}, hi.y};
    case RoomPlane::kRightWall: return {{0, 1, 0}, lo.y};
    case RoomPlane::kNearWall: return {{1, 0, 0}, lo.x};
    case RoomPlane::kFarWall: return {{1, 0, 0}, hi.x};
  }
  return {};
}

double Room::area(RoomPlane which) const {
  switch (which) {
    case RoomPlane::kFloor:
    case RoomPlane::kCeiling: return length * width;
    case RoomPlane::kLeftWall:
    case RoomPlane::kRightWall: return length * height;
    case RoomPlane::kNearWall:
    case RoomPlane::kFarWall: return width * height;
  }
  return 0.0;
}

std::size_t DustSpec::rate(int lvl) const {
  return rates.at(static_cast<std::size_t>(lvl));
}

std::optional<double> SceneSpec::plane_gain(RoomPlane plane) const {
  for (const ReflectivePlane& r : reflective_planes) {
    if (r.plane == plane) return r.gain_db;
  }
  return std::nullopt;
}

void SceneSpec::validate() const {
  require(room.length > 0 && room.width > 0 && room.height > 0,
          "room dimensions must be > 0");
  require(room.sensor_height > 0 && room.sensor_height < room.height,
          "sensor_height must lie strictly inside the room height");
  require(std::abs(room.sensor_lateral) < room.width / 2,
          "sensor_lateral must lie strictly inside the room width");
  require(sensor.fov_azimuth > 0 && sensor.fov_azimuth <= kPi,
          "fov azimuth half-angle must be in (0, 180] deg");
  require(sensor.fov_elevation > 0 && sensor.fov_elevation <= kPi / 2,
          "fov elevation half-angle must be in (0, 90] deg");
  require(sensor.max_range > 0, "max_range must be > 0");
  require(sensor.velocity_jitter >= 0, "velocity_jitter must be >= 0");
  require(frame_rate > 0 && std::isfinite(frame_rate), "frame_rate must be > 0");
  require(frame_count >= 1, "frame_count must be >= 1");

  const Vec3 lo = room.min_corner();
  const Vec3 hi = room.max_corner();
  for (std::size_t i = 0; i < pedestrians.size(); ++i) {
    const PedestrianSpec& p = pedestrians[i];
    const std::string who = "pedestrian " + std::to_string(i) + ": ";
    require(!p.waypoints.empty(), who + "needs at least one waypoint");
    require(p.speed >= 0 && std::isfinite(p.speed), who + "speed must be >= 0");
    require(p.radius > 0, who + "radius must be > 0");
    require(p.height >= 2 * p.radius, who + "height must be >= 2 * radius");
    require(p.height <= room.height, who + "taller than the room");
    require(p.points_per_frame >= 1, who + "points_per_frame must be >= 1");
    require(p.rcs_sigma >= 0, who + "rcs_sigma must be >= 0");
    for (const auto& w : p.waypoints) {
      require(w[0] >= lo.x && w[0] <= hi.x && w[1] >= lo.y && w[1] <= hi.y,
              who + "waypoint outside the room footprint");
    }
  }

  require(!dust.rates.empty(), "dust rates must not be empty");
  require(std::is_sorted(dust.rates.begin(), dust.rates.end()),
          "dust rates must be non-decreasing in level");
  require(dust.level >= 0 &&
              static_cast<std::size_t>(dust.level) < dust.rates.size(),
          "dust level outside the rate table");
  require(dust.rcs_sigma >= 0, "dust rcs_sigma must be >= 0");
  require(dust.max_abs_velocity >= 0, "dust max_abs_velocity must be >= 0");

  for (const ReflectivePlane& r : reflective_planes) {
    require(std::isfinite(r.gain_db), "reflective plane gain must be finite");
  }
  if (ghost.enabled) {
    for (RoomPlane p : ghost.planes) {
      require(plane_gain(p).has_value(),
              "ghost plane '" + std::string(to_string(p)) +
                  "' is not in the reflective plane list");
    }
  }
  require(structure.rcs_sigma >= 0, "structure rcs_sigma must be >= 0");
  if (structure.enabled && structure.points_per_frame > 0) {
    require(!structure.surfaces.empty(), "structure needs at least one surface");
  }
}

RadarPoint mirror_ghost(const RadarPoint& point, const Plane& plane,
                        double gain_db) {
  const Vec3 pos = point.position();
  const Vec3 ghost_pos = reflect_point(pos, plane);

  // Only the radial component of the true velocity is known; reflect that
  // vector and read its sign along the ghost's line of sight.
  double v = 0.0;
  if (point.v != 0.0) {
    const Vec3 radial = point.v * unit_or_zero(pos);
    const double along = dot(reflect_direction(radial, plane),
                             unit_or_zero(ghost_pos));
    const double sign = along != 0.0 ? std::copysign(1.0, along)
                                     : std::copysign(1.0, point.v);
    v = sign * std::abs(point.v);
  }
  return from_cartesian(ghost_pos, point.rcs + gain_db, v);
}

SceneSimulator::SceneSimulator(SceneSpec spec)
    : spec_(std::move(spec)), rng_(spec_.rng_seed) {
  spec_.validate();
}

int SceneSimulator::dust_level_at(std::uint64_t seq) const {
  if (!spec_.dust.escalate) return spec_.dust.level;
  const auto levels = static_cast<std::uint64_t>(spec_.dust.level) + 1;
  return static_cast<int>(seq * levels / spec_.frame_count);
}

SceneSimulator::BodyState SceneSimulator::walker_state(
    const PedestrianSpec& ped, double t) const {
  const double floor_z = spec_.room.min_corner().z;
  const auto& w = ped.waypoints;
  auto at = [&](std::size_t i) { return Vec3{w[i][0], w[i][1], floor_z}; };

  double perimeter = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    perimeter += norm(at((i + 1) % w.size()) - at(i));
  }
  if (w.size() < 2 || perimeter == 0.0 || ped.speed == 0.0) {
    return {at(0), {}};
  }

  double s = std::fmod(ped.speed * t, perimeter);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec3 a = at(i);
    const Vec3 b = at((i + 1) % w.size());
    const double len = norm(b - a);
    if (len == 0.0) continue;
    if (s <= len || i + 1 == w.size()) {
      const Vec3 dir = (1.0 / len) * (b - a);
      return {a + std::min(s, len) * dir, ped.speed * dir};
    }
    s -= len;
  }
  return {at(0), {}};
}

void SceneSimulator::add_pedestrian(const PedestrianSpec& ped, int id,
                                    const BodyState& s, SimFrame& out) {
  const double r = ped.radius;
  const double cyl_len = ped.height - 2 * r;
  // Visible (sensor-facing) half of the capsule surface.
  const double cyl_area = kPi * r * cyl_len;
  const double cap_area = 2 * kPi * r * r;
  const Vec3 toward_sensor =
      unit_or_zero(Vec3{-s.foot.x, -s.foot.y, 0.0});
  const double face = std::atan2(toward_sensor.y, toward_sensor.x);

  std::vector<RadarPoint> body;
  body.reserve(ped.points_per_frame);
  for (std::size_t k = 0; k < ped.points_per_frame; ++k) {
    Vec3 p;
    if (rng_.uniform01() * (cyl_area + cap_area) < cyl_area) {
      const double phi = face + rng_.uniform(-kPi / 2, kPi / 2);
      const double h = r + cyl_len * rng_.uniform01();
      p = s.foot + Vec3{r * std::cos(phi), r * std::sin(phi), h};
    } else {
      // Uniform direction on the sphere, folded onto the facing side.
      const double cz = rng_.uniform(-1.0, 1.0);
      const double az = rng_.uniform(-kPi, kPi);
      const double rho = std::sqrt(std::max(0.0, 1.0 - cz * cz));
      Vec3 n{rho * std::cos(az), rho * std::sin(az), std::abs(cz)};
      const double along = n.x * toward_sensor.x + n.y * toward_sensor.y;
      if (along < 0.0) {
        n.x -= 2 * along * toward_sensor.x;
        n.y -= 2 * along * toward_sensor.y;
      }
      const bool top = rng_.uniform01() < 0.5;
      if (!top) n.z = -n.z;
      const double center_h = top ? ped.height - r : r;
      p = s.foot + Vec3{0, 0, center_h} + r * n;
    }
    const double rcs = rng_.normal(ped.rcs_mean, ped.rcs_sigma);
    const double jitter = spec_.sensor.velocity_jitter;
    const double v =
        dot(s.velocity, unit_or_zero(p)) + rng_.uniform(-jitter, jitter);
    body.push_back(from_cartesian(p, rcs, v));
  }

  for (const RadarPoint& p : body) {
    out.frame.points.push_back(p);
    out.truth.labels.push_back({PointSource::kPedestrian, id});
  }
  if (!spec_.ghost.enabled) return;
  for (RoomPlane which : spec_.ghost.planes) {
    const Plane plane = spec_.room.plane(which);
    const double gain = *spec_.plane_gain(which) + spec_.ghost.rcs_inflation_db;
    for (const RadarPoint& p : body) {
      out.frame.points.push_back(mirror_ghost(p, plane, gain));
      out.truth.labels.push_back({PointSource::kGhost, -1});
    }
  }
}

void SceneSimulator::add_dust(int level, SimFrame& out) {
  const Vec3 lo = spec_.room.min_corner();
  const Vec3 hi = spec_.room.max_corner();
  const DustSpec& dust = spec_.dust;
  const std::size_t count = dust.rate(level);
  for (std::size_t k = 0; k < count; ++k) {
    const Vec3 p{rng_.uniform(lo.x, hi.x), rng_.uniform(lo.y, hi.y),
                 rng_.uniform(lo.z, hi.z)};
    const double rcs = rng_.normal(dust.rcs_mean, dust.rcs_sigma);
    const double v = rng_.uniform(-dust.max_abs_velocity, dust.max_abs_velocity);
    out.frame.points.push_back(from_cartesian(p, rcs, v));
    out.truth.labels.push_back({PointSource::kDust, -1});
  }
}

void SceneSimulator::add_structure(SimFrame& out) {
  const StructureSpec& st = spec_.structure;
  const Room& room = spec_.room;
  const Vec3 lo = room.min_corner();
  const Vec3 hi = room.max_corner();

  double total_area = 0.0;
  for (RoomPlane s : st.surfaces) total_area += room.area(s);

  for (std::size_t k = 0; k < st.points_per_frame; ++k) {
    double pick = rng_.uniform01() * total_area;
    RoomPlane surface = st.surfaces.back();
    for (RoomPlane s : st.surfaces) {
      if (pick < room.area(s)) {
        surface = s;
        break;
      }
      pick -= room.area(s);
    }
    const double a = rng_.uniform01();
    const double b = rng_.uniform01();
    Vec3 p;
    switch (surface) {
      case RoomPlane::kFloor:
      case RoomPlane::kCeiling:
        p = {lo.x + a * (hi.x - lo.x), lo.y + b * (hi.y - lo.y),
             surface == RoomPlane::kFloor ? lo.z : hi.z};
        break;
      case RoomPlane::kLeftWall:
      case RoomPlane::kRightWall:
        p = {lo.x + a * (hi.x - lo.x),
             surface == RoomPlane::kRightWall ? lo.y : hi.y,
             lo.z + b * (hi.z - lo.z)};
        break;
      case RoomPlane::kNearWall:
      case RoomPlane::kFarWall:
        p = {surface == RoomPlane::kNearWall ? lo.x : hi.x,
             lo.y + a * (hi.y - lo.y), lo.z + b * (hi.z - lo.z)};
        break;
    }
    const double rcs = rng_.normal(st.rcs_mean, st.rcs_sigma);
    out.frame.points.push_back(from_cartesian(p, rcs, 0.0));
    out.truth.labels.push_back({PointSource::kStructure, -1});
  }
}

SimFrame SceneSimulator::next() {
  SimFrame out;
  const std::uint64_t seq = next_seq_++;
  const double t = static_cast<double>(seq) / spec_.frame_rate;
  out.frame.seq = seq;
  out.frame.timestamp = t;
  out.truth.seq = seq;
  out.truth.dust_level = dust_level_at(seq);

  const SensorModel& sensor = spec_.sensor;
  for (std::size_t i = 0; i < spec_.pedestrians.size(); ++i) {
    const PedestrianSpec& ped = spec_.pedestrians[i];
    const BodyState state = walker_state(ped, t);
    const int id = static_cast<int>(i);
    add_pedestrian(ped, id, state, out);

    const Vec3 center = state.foot + Vec3{0, 0, ped.height / 2};
    const RadarPoint c = from_cartesian(center, 0.0, 0.0);
    if (std::abs(c.azimuth) <= sensor.fov_azimuth &&
        std::abs(c.elevation) <= sensor.fov_elevation &&
        c.range() <= sensor.max_range) {
      out.truth.pedestrians.push_back({id, center});
    }
  }
  add_dust(out.truth.dust_level, out);
  if (spec_.structure.enabled) add_structure(out);
  return out;
}

std::vector<SimFrame> simulate(const SceneSpec& spec) {
  SceneSimulator sim(spec);
  std::vector<SimFrame> frames;
  frames.reserve(spec.frame_count);
  while (!sim.done()) frames.push_back(sim.next());
  return frames;
}

}  // namespace dustradar
