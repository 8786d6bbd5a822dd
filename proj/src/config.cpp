#include "dustradar/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dustradar/error.hpp"

namespace dustradar {

extern const char* const kDefaultPipelineConfigJson;
extern const char* const kDefaultSceneSpecJson;

namespace {

using nlohmann::json;

// Strict accessor over one JSON object: remembers which keys were read so
// finish() can reject anything left over.
class Fields {
 public:
  Fields(const json& j, std::string path, ErrorKind kind)
      : j_(j), path_(std::move(path)), kind_(kind) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] void fail(const std::string& where,
                         const std::string& what) const {
    throw Error(kind_, (where.empty() ? std::string("<root>") : where) + ": " +
                           what);
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& get(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) fail(at(key), "missing required key");
    seen_.insert(key);
    return *it;
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    return v.get<double>();
  }

  std::size_t count(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(at(key), "expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  long long integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key) {
    const json& v = get(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) fail(at(key), "expected an array");
    return v;
  }

  Fields object(const std::string& key) { return Fields(get(key), at(key), kind_); }

  bool has(const std::string& key) const { return j_.contains(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  ErrorKind kind_;
  std::set<std::string> seen_;
};

json parse_json(std::string_view text, ErrorKind kind) {
  try {
    return json::parse(text.begin(), text.end(), nullptr,
                       /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(kind, std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path, ErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(kind, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// [lo, hi] with null meaning unbounded on that side.
std::optional<Interval> optional_interval(Fields& f, const std::string& key) {
  if (!f.has(key)) return std::nullopt;
  const json& v = f.array(key);
  if (v.size() != 2) f.fail(f.at(key), "expected [lo, hi]");
  Interval iv;
  for (int side = 0; side < 2; ++side) {
    const json& b = v[side];
    if (b.is_null()) continue;
    if (!b.is_number()) f.fail(f.at(key), "bounds must be numbers or null");
    (side == 0 ? iv.lo : iv.hi) = b.get<double>();
  }
  return iv;
}

FilterConfig parse_filter(Fields f) {
  FilterConfig c;
  c.rcs_min = f.number("rcs_min_dbsm");
  c.rcs_max = f.number("rcs_max_dbsm");
  c.az_min = deg_to_rad(f.number("azimuth_min_deg"));
  c.az_max = deg_to_rad(f.number("azimuth_max_deg"));
  c.el_min = deg_to_rad(f.number("elevation_min_deg"));
  c.el_max = deg_to_rad(f.number("elevation_max_deg"));
  c.v_abs_max = f.number("velocity_abs_max_mps");
  Fields gate = f.object("static_gate");
  c.enable_static_gate = gate.boolean("enabled");
  c.static_band = gate.number("band_mps");
  c.static_range_min = gate.number("range_min_m");
  c.static_range_max = gate.number("range_max_m");
  gate.finish();
  f.finish();
  return c;
}

ClassRule parse_rule(Fields f) {
  ClassRule r;
  r.name = f.string("name");
  const std::string label = f.string("label");
  const auto parsed = parse_class_label(label);
  if (!parsed) f.fail(f.at("label"), "unknown class label '" + label + "'");
  r.label = *parsed;
  r.priority = static_cast<int>(f.integer("priority"));
  r.size = optional_interval(f, "size");
  r.abs_mean_velocity = optional_interval(f, "abs_mean_velocity_mps");
  r.mode_rcs = optional_interval(f, "mode_rcs_dbsm");
  r.extent_z = optional_interval(f, "extent_z_m");
  r.horizontal_extent = optional_interval(f, "horizontal_extent_m");
  f.finish();
  return r;
}

RoomPlane plane_value(Fields& f, const std::string& where, const json& v) {
  if (!v.is_string()) f.fail(where, "expected a plane name");
  const auto p = parse_room_plane(v.get<std::string>());
  if (!p) f.fail(where, "unknown plane '" + v.get<std::string>() + "'");
  return *p;
}

std::vector<RoomPlane> plane_list(Fields& f, const std::string& key) {
  std::vector<RoomPlane> out;
  const json& arr = f.array(key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(plane_value(f, f.at(key) + "[" + std::to_string(i) + "]", arr[i]));
  }
  return out;
}

PedestrianSpec parse_pedestrian(Fields f) {
  PedestrianSpec p;
  const json& wps = f.array("waypoints");
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const json& w = wps[i];
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      f.fail(f.at("waypoints") + "[" + std::to_string(i) + "]",
             "expected [x_m, y_m]");
    }
    p.waypoints.push_back({w[0].get<double>(), w[1].get<double>()});
  }
  p.speed = f.number("speed_mps");
  p.height = f.number("height_m");
  p.radius = f.number("radius_m");
  p.points_per_frame = f.count("points_per_frame");
  p.rcs_mean = f.number("rcs_mean_dbsm");
  p.rcs_sigma = f.number("rcs_sigma_dbsm");
  f.finish();
  return p;
}

}  // namespace

void PipelineConfig::validate() const {
  filter.validate();
  if (!(cluster.distance > 0.0) || !std::isfinite(cluster.distance)) {
    throw Error(ErrorKind::kInvalidConfig, "cluster.distance_m must be > 0");
  }
  if (cluster.min_cluster_size == 0) {
    throw Error(ErrorKind::kInvalidConfig, "cluster.min_cluster_size must be >= 1");
  }
  if (!(rcs_bin_width > 0.0) || !std::isfinite(rcs_bin_width)) {
    throw Error(ErrorKind::kInvalidConfig, "classify.rcs_bin_width_dbsm must be > 0");
  }
  if (!(io.match_radius > 0.0)) {
    throw Error(ErrorKind::kInvalidConfig, "io.match_radius_m must be > 0");
  }
  if (io.threads == 0) {
    throw Error(ErrorKind::kInvalidConfig, "io.threads must be >= 1");
  }
}

PipelineConfig parse_pipeline_config(std::string_view json_text) {
  const json root = parse_json(json_text, ErrorKind::kInvalidConfig);
  Fields f(root, "", ErrorKind::kInvalidConfig);

  PipelineConfig c;
  c.filter = parse_filter(f.object("filter"));

  Fields cl = f.object("cluster");
  c.cluster.distance = cl.number("distance_m");
  c.cluster.min_cluster_size = cl.count("min_cluster_size");
  cl.finish();

  Fields cls = f.object("classify");
  c.rcs_bin_width = cls.number("rcs_bin_width_dbsm");
  const json& rules = cls.array("rules");
  std::vector<ClassRule> parsed;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    parsed.push_back(parse_rule(Fields(
        rules[i], "classify.rules[" + std::to_string(i) + "]",
        ErrorKind::kInvalidConfig)));
  }
  cls.finish();
  c.rules = RuleSet(std::move(parsed));

  Fields io = f.object("io");
  c.io.match_radius = io.number("match_radius_m");
  c.io.threads = io.count("threads");
  io.finish();

  f.finish();
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return parse_pipeline_config(read_file(path, ErrorKind::kInvalidConfig));
}

SceneSpec parse_scene_spec(std::string_view json_text) {
  const json root = parse_json(json_text, ErrorKind::kInvalidSpec);
  Fields f(root, "", ErrorKind::kInvalidSpec);
  SceneSpec s;

  Fields room = f.object("room");
  s.room.length = room.number("length_m");
  s.room.width = room.number("width_m");
  s.room.height = room.number("height_m");
  s.room.sensor_height = room.number("sensor_height_m");
  s.room.sensor_lateral = room.number("sensor_lateral_m");
  const json& planes = room.array("reflective_planes");
  for (std::size_t i = 0; i < planes.size(); ++i) {
    Fields pf(planes[i], room.at("reflective_planes") + "[" + std::to_string(i) + "]",
              ErrorKind::kInvalidSpec);
    ReflectivePlane rp;
    rp.plane = plane_value(pf, pf.at("plane"), pf.get("plane"));
    rp.gain_db = pf.number("gain_db");
    pf.finish();
    s.reflective_planes.push_back(rp);
  }
  room.finish();

  Fields sensor = f.object("sensor");
  s.sensor.fov_azimuth = deg_to_rad(sensor.number("fov_azimuth_deg"));
  s.sensor.fov_elevation = deg_to_rad(sensor.number("fov_elevation_deg"));
  s.sensor.max_range = sensor.number("max_range_m");
  s.sensor.velocity_jitter = sensor.number("velocity_jitter_mps");
  sensor.finish();

  const json& peds = f.array("pedestrians");
  for (std::size_t i = 0; i < peds.size(); ++i) {
    s.pedestrians.push_back(parse_pedestrian(
        Fields(peds[i], "pedestrians[" + std::to_string(i) + "]",
               ErrorKind::kInvalidSpec)));
  }

  Fields dust = f.object("dust");
  s.dust.level = static_cast<int>(dust.integer("level"));
  s.dust.rates.clear();
  const json& rates = dust.array("rates_per_level");
  for (const json& r : rates) {
    if (!r.is_number_unsigned()) {
      dust.fail(dust.at("rates_per_level"), "rates must be non-negative integers");
    }
    s.dust.rates.push_back(r.get<std::size_t>());
  }
  s.dust.rcs_mean = dust.number("rcs_mean_dbsm");
  s.dust.rcs_sigma = dust.number("rcs_sigma_dbsm");
  s.dust.max_abs_velocity = dust.number("max_abs_velocity_mps");
  s.dust.escalate = dust.boolean("escalate");
  dust.finish();

  Fields ghost = f.object("ghost");
  s.ghost.enabled = ghost.boolean("enabled");
  s.ghost.planes = plane_list(ghost, "planes");
  s.ghost.rcs_inflation_db = ghost.number("rcs_inflation_db");
  ghost.finish();

  Fields st = f.object("structure");
  s.structure.enabled = st.boolean("enabled");
  s.structure.points_per_frame = st.count("points_per_frame");
  s.structure.rcs_mean = st.number("rcs_mean_dbsm");
  s.structure.rcs_sigma = st.number("rcs_sigma_dbsm");
  s.structure.surfaces = plane_list(st, "surfaces");
  st.finish();

  s.frame_rate = f.number("frame_rate_hz");
  s.frame_count = f.count("frame_count");
  const json& seed = f.get("rng_seed");
  if (!seed.is_number_unsigned()) f.fail("rng_seed", "expected a non-negative integer");
  s.rng_seed = seed.get<std::uint64_t>();
  f.finish();

  s.validate();
  return s;
}

SceneSpec load_scene_spec(const std::string& path) {
  return parse_scene_spec(read_file(path, ErrorKind::kInvalidSpec));
}

std::string_view default_pipeline_config_text() { return kDefaultPipelineConfigJson; }
std::string_view default_scene_spec_text() { return kDefaultSceneSpecJson; }

PipelineConfig default_pipeline_config() {
  return parse_pipeline_config(default_pipeline_config_text());
}

SceneSpec default_scene_spec() { return parse_scene_spec(default_scene_spec_text()); }

}  // namespace dustradar
