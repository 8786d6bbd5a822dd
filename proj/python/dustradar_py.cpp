#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "dustradar/classify.hpp"
#include "dustradar/clustering.hpp"
#include "dustradar/config.hpp"
#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"
#include "dustradar/kdtree.hpp"
#include "dustradar/metrics.hpp"
#include "dustradar/noise_filter.hpp"
#include "dustradar/pipeline.hpp"
#include "dustradar/point_model.hpp"
#include "dustradar/scene_sim.hpp"

namespace py = pybind11;
using namespace dustradar;

namespace {

// Frames as (n, 7) float64 arrays: x, y, z, rcs, v, azimuth, elevation
// (radians).
py::array_t<double> points_to_array(const Frame& f) {
  py::array_t<double> out({static_cast<py::ssize_t>(f.points.size()), py::ssize_t{7}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const RadarPoint& p = f.points[i];
    const auto r = static_cast<py::ssize_t>(i);
    a(r, 0) = p.x;
    a(r, 1) = p.y;
    a(r, 2) = p.z;
    a(r, 3) = p.rcs;
    a(r, 4) = p.v;
    a(r, 5) = p.azimuth;
    a(r, 6) = p.elevation;
  }
  return out;
}

Frame frame_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
                       std::uint64_t seq, double timestamp, bool validate) {
  if (arr.ndim() != 2 || (arr.shape(1) != 7 && arr.shape(1) != 5)) {
    throw py::value_error("expected an (n, 7) array of x,y,z,rcs,v,az,el or (n, 5) of x,y,z,rcs,v");
  }
  auto a = arr.unchecked<2>();
  Frame f;
  f.seq = seq;
  f.timestamp = timestamp;
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    if (a.shape(1) == 5) {
      f.points.push_back(from_cartesian({a(i, 0), a(i, 1), a(i, 2)}, a(i, 3), a(i, 4)));
      continue;
    }
    RadarPoint p{a(i, 0), a(i, 1), a(i, 2), a(i, 3), a(i, 4), a(i, 5), a(i, 6)};
    if (validate) {
      if (auto bad = validate_point(p, kIngestAngleTolerance)) {
        throw Error(ErrorKind::kParseError, "point " + std::to_string(i) + ": " + bad->describe());
      }
    }
    f.points.push_back(p);
  }
  return f;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParseError, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

PYBIND11_MODULE(_dustradar, m) {
  m.doc() = "4D mmWave radar noise filtering, clustering and pedestrian detection";
  m.attr("__version__") = "0.1.0";

  static py::exception<Error> error_type(m, "DustradarError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::handle(error_type.ptr())(std::string(to_string(e.kind())) + ": " + e.what());
      err.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  m.def("deg_to_rad", &deg_to_rad);
  m.def("rad_to_deg", &rad_to_deg);

  // point_model
  py::class_<Vec3>(m, "Vec3")
      .def(py::init<>())
      .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }))
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z)
      .def("__iter__", [](const Vec3& v) { return py::iter(py::make_tuple(v.x, v.y, v.z)); })
      .def("__repr__", [](const Vec3& v) {
        return "Vec3(" + format_number(v.x) + ", " + format_number(v.y) + ", " +
               format_number(v.z) + ")";
      });

  py::class_<RadarPoint>(m, "RadarPoint")
      .def(py::init<>())
      .def_readwrite("x", &RadarPoint::x)
      .def_readwrite("y", &RadarPoint::y)
      .def_readwrite("z", &RadarPoint::z)
      .def_readwrite("rcs", &RadarPoint::rcs)
      .def_readwrite("v", &RadarPoint::v)
      .def_readwrite("azimuth", &RadarPoint::azimuth)
      .def_readwrite("elevation", &RadarPoint::elevation)
      .def_property_readonly("range", &RadarPoint::range)
      .def("__repr__", [](const RadarPoint& p) {
        return "RadarPoint(x=" + format_number(p.x) + ", y=" + format_number(p.y) +
               ", z=" + format_number(p.z) + ", rcs=" + format_number(p.rcs) +
               ", v=" + format_number(p.v) + ")";
      });

  m.def("from_spherical", &from_spherical, py::arg("range"), py::arg("azimuth"),
        py::arg("elevation"), py::arg("rcs"), py::arg("v"),
        "Point from range (m), azimuth and elevation (radians), rcs (dBsm), v (m/s).");
  m.def("from_cartesian",
        [](double x, double y, double z, double rcs, double v) {
          return from_cartesian({x, y, z}, rcs, v);
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("rcs"), py::arg("v"));
  m.def("validate_point",
        [](const RadarPoint& p, double tol) -> std::optional<std::string> {
          if (auto bad = validate_point(p, tol)) return bad->describe();
          return std::nullopt;
        },
        py::arg("point"), py::arg("angle_tolerance") = kIngestAngleTolerance,
        "None if the point is valid, otherwise a description of the first violation.");

  py::class_<Frame>(m, "Frame")
      .def(py::init<>())
      .def_readwrite("seq", &Frame::seq)
      .def_readwrite("timestamp", &Frame::timestamp)
      .def_readwrite("points", &Frame::points)
      .def("__len__", [](const Frame& f) { return f.points.size(); })
      .def("to_array", &points_to_array, "(n, 7) array: x, y, z, rcs, v, azimuth, elevation")
      .def_static("from_array", &frame_from_array, py::arg("points"), py::arg("seq") = 0,
                  py::arg("timestamp") = 0.0, py::arg("validate") = true,
                  "Build a frame from an (n, 7) array, or (n, 5) x,y,z,rcs,v with derived angles.");

  // noise_filter
  py::class_<FilterConfig>(m, "FilterConfig")
      .def(py::init<>())
      .def_readwrite("rcs_min", &FilterConfig::rcs_min)
      .def_readwrite("rcs_max", &FilterConfig::rcs_max)
      .def_readwrite("az_min", &FilterConfig::az_min)
      .def_readwrite("az_max", &FilterConfig::az_max)
      .def_readwrite("el_min", &FilterConfig::el_min)
      .def_readwrite("el_max", &FilterConfig::el_max)
      .def_readwrite("v_abs_max", &FilterConfig::v_abs_max)
      .def_readwrite("static_band", &FilterConfig::static_band)
      .def_readwrite("static_range_min", &FilterConfig::static_range_min)
      .def_readwrite("static_range_max", &FilterConfig::static_range_max)
      .def_readwrite("enable_static_gate", &FilterConfig::enable_static_gate)
      .def("validate", &FilterConfig::validate);

  py::class_<FilterReport>(m, "FilterReport")
      .def_readonly("input_count", &FilterReport::input_count)
      .def_readonly("kept_count", &FilterReport::kept_count)
      .def_property_readonly("rejected", [](const FilterReport& r) {
        py::dict d;
        for (FilterRule rule : {FilterRule::kRcs, FilterRule::kAngle, FilterRule::kVelocity,
                                FilterRule::kVelocityStatic}) {
          d[py::str(std::string(to_string(rule)))] = r.rejected(rule);
        }
        return d;
      });

  m.def("point_passes",
        [](const RadarPoint& p, const FilterConfig& cfg) -> std::optional<std::string> {
          const FilterDecision d = point_passes(p, cfg);
          if (d.keep) return std::nullopt;
          return std::string(to_string(d.rule));
        },
        py::arg("point"), py::arg("config"),
        "None if the point is kept, otherwise the name of the first failing rule.");
  m.def("filter_frame",
        [](const Frame& f, const FilterConfig& cfg) {
          std::vector<std::size_t> kept;
          auto [out, report] = filter_frame(f, cfg, &kept);
          return py::make_tuple(std::move(out), report, std::move(kept));
        },
        py::arg("frame"), py::arg("config"),
        "Returns (filtered frame, report, kept raw indices).");

  // kdtree / clustering
  py::class_<KdTree>(m, "KdTree")
      .def(py::init([](const Frame& f) { return KdTree(f.points); }), py::arg("frame"))
      .def("__len__", &KdTree::size)
      .def("radius_neighbors",
           [](const KdTree& t, double x, double y, double z, double r) {
             return t.radius_neighbors({x, y, z}, r);
           },
           py::arg("x"), py::arg("y"), py::arg("z"), py::arg("radius"),
           "Sorted indices within the inclusive radius.");

  py::class_<Clustering>(m, "Clustering")
      .def_readonly("labels", &Clustering::labels)
      .def_readonly("clusters", &Clustering::clusters)
      .def_property_readonly("unclustered_count", &Clustering::unclustered_count);
  m.def("extract_clusters",
        [](const Frame& f, double d, std::size_t min_size) {
          return extract_clusters(f, ClusterParams{d, min_size});
        },
        py::arg("frame"), py::arg("distance") = 0.5, py::arg("min_cluster_size") = 5);

  // classify
  py::enum_<ClassLabel>(m, "ClassLabel")
      .value("Pedestrian", ClassLabel::kPedestrian)
      .value("Clutter", ClassLabel::kClutter)
      .value("Unknown", ClassLabel::kUnknown);

  py::class_<ClusterDescriptor>(m, "ClusterDescriptor")
      .def_readonly("size", &ClusterDescriptor::size)
      .def_readonly("mean_velocity", &ClusterDescriptor::mean_velocity)
      .def_readonly("abs_mean_velocity", &ClusterDescriptor::abs_mean_velocity)
      .def_readonly("mode_rcs", &ClusterDescriptor::mode_rcs)
      .def_readonly("centroid", &ClusterDescriptor::centroid)
      .def_readonly("extent", &ClusterDescriptor::extent)
      .def_readonly("range", &ClusterDescriptor::range);
  m.def("describe_cluster",
        [](const Frame& f, const std::vector<std::size_t>& members, double w) {
          return describe_cluster(f, members, w);
        },
        py::arg("frame"), py::arg("members"), py::arg("bin_width") = 1.0);
  m.def("binned_mode",
        [](const std::vector<double>& values, double w) { return binned_mode(values, w); },
        py::arg("values"), py::arg("bin_width") = 1.0);

  py::class_<Detection>(m, "Detection")
      .def_readonly("cluster_id", &Detection::cluster_id)
      .def_readonly("label", &Detection::label)
      .def_readonly("descriptor", &Detection::descriptor)
      .def_readonly("rule", &Detection::rule);
  py::class_<RuleSet>(m, "RuleSet").def("describe", &RuleSet::describe);
  m.def("classify_frame", &classify_frame, py::arg("frame"), py::arg("clustering"),
        py::arg("rules"), py::arg("bin_width") = 1.0);

  // config / pipeline
  py::class_<ClusterParams>(m, "ClusterParams")
      .def_readwrite("distance", &ClusterParams::distance)
      .def_readwrite("min_cluster_size", &ClusterParams::min_cluster_size);
  py::class_<IoOptions>(m, "IoOptions")
      .def_readwrite("match_radius", &IoOptions::match_radius)
      .def_readwrite("threads", &IoOptions::threads);
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def_readwrite("filter", &PipelineConfig::filter)
      .def_readwrite("cluster", &PipelineConfig::cluster)
      .def_readwrite("rcs_bin_width", &PipelineConfig::rcs_bin_width)
      .def_readwrite("rules", &PipelineConfig::rules)
      .def_readwrite("io", &PipelineConfig::io)
      .def("validate", &PipelineConfig::validate);
  m.def("default_pipeline_config", &default_pipeline_config);
  m.def("parse_pipeline_config", [](const std::string& text) { return parse_pipeline_config(text); },
        py::arg("json_text"));
  m.def("load_pipeline_config", &load_pipeline_config, py::arg("path"));

  py::class_<FrameReport>(m, "FrameReport")
      .def_readonly("seq", &FrameReport::seq)
      .def_readonly("timestamp", &FrameReport::timestamp)
      .def_readonly("filter", &FrameReport::filter)
      .def_readonly("cluster_count", &FrameReport::cluster_count)
      .def_readonly("pedestrian_count", &FrameReport::pedestrian_count)
      .def_readonly("latency_ms", &FrameReport::latency_ms);
  py::class_<FrameDetections>(m, "FrameDetections")
      .def_readonly("seq", &FrameDetections::seq)
      .def_readonly("timestamp", &FrameDetections::timestamp)
      .def_readonly("detections", &FrameDetections::detections)
      .def_property_readonly("pedestrian_count", &FrameDetections::pedestrian_count);
  py::class_<FrameResult>(m, "FrameResult")
      .def_readonly("detections", &FrameResult::detections)
      .def_readonly("report", &FrameResult::report)
      .def_readonly("kept_indices", &FrameResult::kept_indices)
      .def_readonly("clustering", &FrameResult::clustering);
  m.def("process_frame", &process_frame, py::arg("frame"), py::arg("config"));
  m.def("run_pipeline",
        [](const std::vector<Frame>& frames, const PipelineConfig& cfg) {
          PipelineOutput out;
          {
            py::gil_scoped_release release;
            out = run_pipeline(frames, cfg);
          }
          return py::make_tuple(std::move(out.detections), std::move(out.reports));
        },
        py::arg("frames"), py::arg("config"), "Returns (detections, reports), one per frame.");

  // scene_sim
  py::enum_<PointSource>(m, "PointSource")
      .value("Pedestrian", PointSource::kPedestrian)
      .value("Ghost", PointSource::kGhost)
      .value("Dust", PointSource::kDust)
      .value("Structure", PointSource::kStructure);
  py::class_<PointLabel>(m, "PointLabel")
      .def_readonly("source", &PointLabel::source)
      .def_readonly("pedestrian_id", &PointLabel::pedestrian_id);
  py::class_<TruePedestrian>(m, "TruePedestrian")
      .def_readonly("id", &TruePedestrian::id)
      .def_readonly("position", &TruePedestrian::position);
  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("seq", &GroundTruth::seq)
      .def_readonly("dust_level", &GroundTruth::dust_level)
      .def_readonly("labels", &GroundTruth::labels)
      .def_readonly("pedestrians", &GroundTruth::pedestrians)
      .def_property_readonly("true_count", &GroundTruth::true_count);

  py::class_<DustSpec>(m, "DustSpec")
      .def_readwrite("level", &DustSpec::level)
      .def_readwrite("rates", &DustSpec::rates)
      .def_readwrite("escalate", &DustSpec::escalate);
  py::class_<GhostSpec>(m, "GhostSpec")
      .def_readwrite("enabled", &GhostSpec::enabled)
      .def_readwrite("rcs_inflation_db", &GhostSpec::rcs_inflation_db);
  py::class_<StructureSpec>(m, "StructureSpec")
      .def_readwrite("enabled", &StructureSpec::enabled)
      .def_readwrite("points_per_frame", &StructureSpec::points_per_frame);
  py::class_<SceneSpec>(m, "SceneSpec")
      .def_readwrite("dust", &SceneSpec::dust)
      .def_readwrite("ghost", &SceneSpec::ghost)
      .def_readwrite("structure", &SceneSpec::structure)
      .def_readwrite("frame_rate", &SceneSpec::frame_rate)
      .def_readwrite("frame_count", &SceneSpec::frame_count)
      .def_readwrite("rng_seed", &SceneSpec::rng_seed)
      .def_property_readonly("pedestrian_count",
                             [](const SceneSpec& s) { return s.pedestrians.size(); })
      .def("validate", &SceneSpec::validate);
  m.def("default_scene_spec", &default_scene_spec);
  m.def("parse_scene_spec", [](const std::string& text) { return parse_scene_spec(text); },
        py::arg("json_text"));
  m.def("load_scene_spec", &load_scene_spec, py::arg("path"));
  m.def("simulate",
        [](const SceneSpec& spec) {
          std::vector<SimFrame> sim;
          {
            py::gil_scoped_release release;
            sim = simulate(spec);
          }
          py::list out;
          for (SimFrame& f : sim) out.append(py::make_tuple(std::move(f.frame), std::move(f.truth)));
          return out;
        },
        py::arg("spec"), "List of (frame, ground truth) pairs.");

  // frame_io
  m.def("write_frames",
        [](const std::vector<Frame>& frames) {
          std::ostringstream out;
          write_frames(out, frames);
          return out.str();
        },
        py::arg("frames"), "Frames in the line format, as a string.");
  m.def("read_frames",
        [](const std::string& text) {
          std::istringstream in(text);
          return read_frames(in);
        },
        py::arg("text"));
  m.def("read_frames_file",
        [](const std::string& path) {
          std::istringstream in(read_text(path));
          return read_frames(in);
        },
        py::arg("path"));
  m.def("write_detections",
        [](const std::vector<FrameDetections>& d) {
          std::ostringstream out;
          write_detections(out, std::span<const FrameDetections>(d));
          return out.str();
        },
        py::arg("detections"), "Detection table (CSV with header), as a string.");

  // metrics
  py::class_<LatencyPercentiles>(m, "LatencyPercentiles")
      .def_readonly("p50", &LatencyPercentiles::p50)
      .def_readonly("p95", &LatencyPercentiles::p95)
      .def_readonly("p99", &LatencyPercentiles::p99);
  py::class_<LevelSummary>(m, "LevelSummary")
      .def_readonly("dust_level", &LevelSummary::dust_level)
      .def_readonly("frames", &LevelSummary::frames)
      .def_readonly("mean_raw_points", &LevelSummary::mean_raw_points)
      .def_readonly("mean_kept_points", &LevelSummary::mean_kept_points)
      .def_readonly("mean_detected_pedestrians", &LevelSummary::mean_detected_pedestrians)
      .def_readonly("mean_true_pedestrians", &LevelSummary::mean_true_pedestrians)
      .def_readonly("precision", &LevelSummary::precision)
      .def_readonly("recall", &LevelSummary::recall)
      .def_readonly("latency_ms", &LevelSummary::latency_ms);
  py::class_<EvalSummary>(m, "EvalSummary")
      .def_readonly("levels", &EvalSummary::levels)
      .def_readonly("has_reports", &EvalSummary::has_reports)
      .def("describe", &EvalSummary::describe);
  m.def("evaluate",
        [](const std::vector<FrameDetections>& d, const std::vector<FrameReport>& r,
           const std::vector<GroundTruth>& t, double radius) { return evaluate(d, r, t, radius); },
        py::arg("detections"), py::arg("reports"), py::arg("truth"),
        py::arg("match_radius") = 0.75);
  m.def("latency_percentiles", &latency_percentiles, py::arg("samples_ms"));
}
