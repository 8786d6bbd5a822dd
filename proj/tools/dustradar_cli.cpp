// dustradar: simulate -> filter -> cluster -> classify, plus evaluation and
// latency benchmarking. Every stage reads and writes the line formats in
// dustradar/frame_io.hpp; "-" means stdin/stdout.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dustradar/config.hpp"
#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"
#include "dustradar/metrics.hpp"
#include "dustradar/pipeline.hpp"
#include "dustradar/scene_sim.hpp"

namespace dr = dustradar;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Owns a file stream unless the path is "-".
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw dr::Error(dr::ErrorKind::kParseError, "cannot open '" + path + "'");
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw dr::Error(dr::ErrorKind::kSinkError, "cannot write '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }
  void close() {
    get().flush();
    dr::check_sink(get(), "flush");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// --config plus per-field overrides shared by the processing subcommands.
struct ConfigFlags {
  std::string path;
  std::optional<double> rcs_min, rcs_max;
  std::optional<double> az_min_deg, az_max_deg, el_min_deg, el_max_deg;
  std::optional<double> v_abs_max, static_band, static_range_min, static_range_max;
  std::optional<bool> static_gate;
  std::optional<double> cluster_distance;
  std::optional<std::size_t> min_cluster_size;
  std::optional<double> rcs_bin_width;
  std::optional<std::size_t> threads;

  void attach(CLI::App* app, bool with_filter, bool with_cluster) {
    app->add_option("-c,--config", path,
                    "Pipeline config JSON (default: built-in config/pipeline_default.json)");
    if (with_filter) {
      app->add_option("--rcs-min", rcs_min, "Filter: minimum rcs, dBsm");
      app->add_option("--rcs-max", rcs_max, "Filter: maximum rcs, dBsm");
      app->add_option("--az-min-deg", az_min_deg, "Filter: minimum azimuth, degrees");
      app->add_option("--az-max-deg", az_max_deg, "Filter: maximum azimuth, degrees");
      app->add_option("--el-min-deg", el_min_deg, "Filter: minimum elevation, degrees");
      app->add_option("--el-max-deg", el_max_deg, "Filter: maximum elevation, degrees");
      app->add_option("--v-abs-max", v_abs_max, "Filter: maximum |v|, m/s");
      app->add_option("--static-band", static_band, "Filter: near-zero |v| band, m/s");
      app->add_option("--static-range-min", static_range_min,
                      "Filter: static points kept from this range, m");
      app->add_option("--static-range-max", static_range_max,
                      "Filter: static points kept up to this range, m");
      app->add_option("--static-gate", static_gate, "Filter: enable the static gate (true/false)");
    }
    if (with_cluster) {
      app->add_option("--cluster-distance", cluster_distance, "Cluster distance d, m");
      app->add_option("--min-cluster-size", min_cluster_size, "Minimum cluster size");
      app->add_option("--rcs-bin-width", rcs_bin_width, "RCS histogram bin width, dBsm");
      app->add_option("--threads", threads, "Frames processed concurrently");
    }
  }

  dr::PipelineConfig load() const {
    dr::PipelineConfig c =
        path.empty() ? dr::default_pipeline_config() : dr::load_pipeline_config(path);
    auto set = [](auto& field, const auto& flag) {
      if (flag) field = *flag;
    };
    set(c.filter.rcs_min, rcs_min);
    set(c.filter.rcs_max, rcs_max);
    if (az_min_deg) c.filter.az_min = dr::deg_to_rad(*az_min_deg);
    if (az_max_deg) c.filter.az_max = dr::deg_to_rad(*az_max_deg);
    if (el_min_deg) c.filter.el_min = dr::deg_to_rad(*el_min_deg);
    if (el_max_deg) c.filter.el_max = dr::deg_to_rad(*el_max_deg);
    set(c.filter.v_abs_max, v_abs_max);
    set(c.filter.static_band, static_band);
    set(c.filter.static_range_min, static_range_min);
    set(c.filter.static_range_max, static_range_max);
    set(c.filter.enable_static_gate, static_gate);
    set(c.cluster.distance, cluster_distance);
    set(c.cluster.min_cluster_size, min_cluster_size);
    set(c.rcs_bin_width, rcs_bin_width);
    set(c.io.threads, threads);
    c.validate();
    return c;
  }
};

struct SceneFlags {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> frames;
  std::optional<int> dust_level;
  bool escalate = false;

  void attach(CLI::App* app) {
    app->add_option("-s,--scene", path,
                    "Scene spec JSON (default: built-in config/scene_default.json)");
    app->add_option("--seed", seed, "Override the simulator seed");
    app->add_option("-n,--frames", frames, "Override the frame count");
    app->add_option("--dust-level", dust_level, "Override the dust level");
    app->add_flag("--escalate", escalate, "Ramp the dust level from 0 over the stream");
  }

  dr::SceneSpec load() const {
    dr::SceneSpec s = path.empty() ? dr::default_scene_spec() : dr::load_scene_spec(path);
    if (seed) s.rng_seed = *seed;
    if (frames) s.frame_count = *frames;
    if (dust_level) s.dust.level = *dust_level;
    if (escalate) s.dust.escalate = true;
    s.validate();
    return s;
  }
};

int run_simulate(const SceneFlags& scene, const std::string& out_path,
                 const std::string& truth_path) {
  dr::SceneSimulator sim(scene.load());
  Output out(out_path);
  std::optional<Output> truth;
  if (!truth_path.empty()) truth.emplace(truth_path);
  while (!sim.done()) {
    const dr::SimFrame f = sim.next();
    dr::write_frame(out.get(), f.frame);
    if (truth) dr::write_truth(truth->get(), f.truth);
  }
  out.close();
  if (truth) truth->close();
  return 0;
}

int run_filter(const ConfigFlags& flags, const std::string& in_path,
               const std::string& out_path, const std::string& report_path) {
  const dr::PipelineConfig cfg = flags.load();
  Input in(in_path);
  Output out(out_path);
  std::optional<Output> report;
  if (!report_path.empty()) {
    report.emplace(report_path);
    dr::write_report_header(report->get());
  }
  dr::FrameReader reader(in.get());
  while (auto f = reader.next()) {
    const auto start = std::chrono::steady_clock::now();
    auto [kept, rep] = dr::filter_frame(*f, cfg.filter);
    const auto stop = std::chrono::steady_clock::now();
    dr::write_frame(out.get(), kept);
    if (report) {
      dr::FrameReport r;
      r.seq = f->seq;
      r.timestamp = f->timestamp;
      r.filter = rep;
      r.latency_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      dr::write_report(report->get(), r);
    }
  }
  out.close();
  if (report) report->close();
  return 0;
}

int run_cluster(const ConfigFlags& flags, const std::string& in_path,
                const std::string& out_path) {
  const dr::PipelineConfig cfg = flags.load();
  Input in(in_path);
  Output out(out_path);
  dr::FrameReader reader(in.get());
  while (auto f = reader.next()) {
    const dr::Clustering c = dr::extract_clusters(*f, cfg.cluster);
    dr::write_clustering(out.get(), f->seq, c);
  }
  out.close();
  return 0;
}

int run_classify(const ConfigFlags& flags, const std::string& in_path,
                 const std::string& clusters_path, const std::string& out_path) {
  const dr::PipelineConfig cfg = flags.load();
  Input in(in_path);
  Output out(out_path);
  std::vector<dr::FrameClustering> given;
  if (!clusters_path.empty()) {
    Input cl(clusters_path);
    given = dr::read_clusterings(cl.get());
  }
  dr::write_detections_header(out.get());
  dr::FrameReader reader(in.get());
  std::size_t next_given = 0;
  while (auto f = reader.next()) {
    dr::Clustering c;
    if (clusters_path.empty()) {
      c = dr::extract_clusters(*f, cfg.cluster);
    } else {
      if (next_given >= given.size() || given[next_given].seq != f->seq) {
        throw dr::Error(dr::ErrorKind::kFrameMismatch,
                        "no clustering for frame seq " + std::to_string(f->seq));
      }
      c = std::move(given[next_given++].clustering);
    }
    dr::FrameDetections det;
    det.seq = f->seq;
    det.timestamp = f->timestamp;
    det.detections = dr::classify_frame(*f, c, cfg.rules, cfg.rcs_bin_width);
    dr::write_detections(out.get(), det);
  }
  out.close();
  return 0;
}

int run_pipeline_cmd(const ConfigFlags& flags, const std::string& in_path,
                     const std::string& out_path, const std::string& report_path) {
  const dr::PipelineConfig cfg = flags.load();
  Input in(in_path);
  Output out(out_path);
  std::optional<Output> report;
  if (!report_path.empty()) {
    report.emplace(report_path);
    dr::write_report_header(report->get());
  }
  dr::write_detections_header(out.get());

  // Frames are read in bounded batches so a worker pool can share them
  // without holding the whole stream in memory.
  const std::size_t batch_size = cfg.io.threads > 1 ? 64 * cfg.io.threads : 1;
  dr::FrameReader reader(in.get());
  std::vector<dr::Frame> batch;
  std::vector<double> latencies;
  bool more = true;
  while (more) {
    batch.clear();
    while (batch.size() < batch_size) {
      auto f = reader.next();
      if (!f) {
        more = false;
        break;
      }
      batch.push_back(std::move(*f));
    }
    const dr::PipelineOutput res = dr::run_pipeline(batch, cfg);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      dr::write_detections(out.get(), res.detections[i]);
      if (report) dr::write_report(report->get(), res.reports[i]);
    }
    latencies.insert(latencies.end(), res.latencies_ms.begin(), res.latencies_ms.end());
  }
  out.close();
  if (report) report->close();

  const auto pct = dr::latency_percentiles(latencies);
  std::cerr << "processed " << latencies.size() << " frames; latency ms p50 "
            << pct.p50 << " p95 " << pct.p95 << " p99 " << pct.p99 << '\n';
  return 0;
}

int run_evaluate(const ConfigFlags& flags, std::optional<double> match_radius,
                 const std::string& det_path, const std::string& truth_path,
                 const std::string& report_path, const std::string& out_path,
                 bool quiet) {
  const dr::PipelineConfig cfg = flags.load();
  Input det_in(det_path);
  const auto detections = dr::read_detections(det_in.get());
  Input truth_in(truth_path);
  const auto truth = dr::read_truth(truth_in.get());
  std::vector<dr::FrameReport> reports;
  if (!report_path.empty()) {
    Input rep_in(report_path);
    reports = dr::read_reports(rep_in.get());
  }
  const dr::EvalSummary summary = dr::evaluate(
      detections, reports, truth, match_radius.value_or(cfg.io.match_radius));
  Output out(out_path);
  dr::write_summary_table(out.get(), summary);
  out.close();
  if (!quiet) std::cerr << summary.describe();
  return 0;
}

int run_bench(const ConfigFlags& flags, const SceneFlags& scene,
              const std::vector<std::size_t>& sizes, std::size_t repeats) {
  const dr::PipelineConfig cfg = flags.load();
  const dr::SceneSpec spec = scene.load();

  // Full chain on simulated frames.
  std::vector<dr::Frame> frames;
  for (dr::SimFrame& f : dr::simulate(spec)) frames.push_back(std::move(f.frame));
  const dr::PipelineOutput res = dr::run_pipeline(frames, cfg);
  const auto pct = dr::latency_percentiles(res.latencies_ms);
  std::size_t points = 0;
  for (const auto& f : frames) points += f.points.size();
  std::cout << "pipeline: " << frames.size() << " frames, "
            << (frames.empty() ? 0.0 : static_cast<double>(points) / frames.size())
            << " points/frame, latency ms p50 " << pct.p50 << " p95 " << pct.p95
            << " p99 " << pct.p99 << '\n';

  // Filter stage scaling over synthetic frames of fixed size.
  std::cout << "filter_points,median_ms,ratio_to_previous\n";
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> range(0.0, 25.0), az(-dr::kPi, dr::kPi),
      el(-dr::kPi / 2, dr::kPi / 2), rcs(-60.0, 45.0), vel(-12.0, 12.0);
  double previous = 0.0;
  for (std::size_t n : sizes) {
    // Distinct frames: repeating one frame lets the branch predictor learn
    // its keep/reject pattern and flatters small sizes.
    std::vector<dr::Frame> pool(16);
    for (dr::Frame& f : pool) {
      for (std::size_t i = 0; i < n; ++i) {
        f.points.push_back(dr::from_spherical(range(rng), az(rng), el(rng), rcs(rng), vel(rng)));
      }
    }
    std::vector<double> samples;
    for (std::size_t r = 0; r < repeats; ++r) {
      const dr::Frame& f = pool[r % pool.size()];
      const auto start = std::chrono::steady_clock::now();
      dr::filter_frame(f, cfg.filter);
      const auto stop = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(samples.begin(), samples.end());
    const double median = dr::nearest_rank_percentile(samples, 50.0);
    std::cout << n << ',' << median << ',';
    if (previous > 0.0) {
      std::cout << median / previous;
    } else {
      std::cout << '-';
    }
    std::cout << '\n';
    previous = median;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dustradar: 4D radar noise filtering, clustering and pedestrian detection"};
  app.require_subcommand(1);

  SceneFlags sim_scene;
  std::string sim_out = "-";
  std::string sim_truth;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dusty scene");
  sim_scene.attach(sim);
  sim->add_option("-o,--output", sim_out, "Frames output ('-' = stdout)");
  sim->add_option("-t,--truth", sim_truth, "Ground-truth output");

  ConfigFlags filt_cfg;
  std::string filt_in = "-", filt_out = "-", filt_report;
  auto* filt = app.add_subcommand("filter", "Apply the threshold noise filter");
  filt_cfg.attach(filt, true, false);
  filt->add_option("-i,--input", filt_in, "Frames input ('-' = stdin)");
  filt->add_option("-o,--output", filt_out, "Filtered frames output");
  filt->add_option("-r,--report", filt_report, "Per-frame filter report table");

  ConfigFlags clus_cfg;
  std::string clus_in = "-", clus_out = "-";
  auto* clus = app.add_subcommand("cluster", "Euclidean clustering of (filtered) frames");
  clus_cfg.attach(clus, false, true);
  clus->add_option("-i,--input", clus_in, "Frames input");
  clus->add_option("-o,--output", clus_out, "Cluster labels output");

  ConfigFlags cls_cfg;
  std::string cls_in = "-", cls_clusters, cls_out = "-";
  auto* cls = app.add_subcommand("classify", "Describe and classify clusters");
  cls_cfg.attach(cls, false, true);
  cls->add_option("-i,--input", cls_in, "Frames input (the frames that were clustered)");
  cls->add_option("--clusters", cls_clusters, "Cluster labels from 'cluster' (default: recompute)");
  cls->add_option("-o,--output", cls_out, "Detections table output");

  ConfigFlags pipe_cfg;
  std::string pipe_in = "-", pipe_out = "-", pipe_report;
  auto* pipe = app.add_subcommand("pipeline", "filter -> cluster -> classify");
  pipe_cfg.attach(pipe, true, true);
  pipe->add_option("-i,--input", pipe_in, "Raw frames input");
  pipe->add_option("-o,--output", pipe_out, "Detections table output");
  pipe->add_option("-r,--report", pipe_report, "Per-frame report table (counts, latency)");

  ConfigFlags eval_cfg;
  std::optional<double> eval_radius;
  std::string eval_det, eval_truth, eval_report, eval_out = "-";
  bool eval_quiet = false;
  auto* eval = app.add_subcommand("evaluate", "Score detections against ground truth");
  eval_cfg.attach(eval, false, false);
  eval->add_option("-d,--detections", eval_det, "Detections table")->required();
  eval->add_option("-t,--truth", eval_truth, "Ground truth")->required();
  eval->add_option("-r,--report", eval_report, "Report table from 'pipeline'");
  eval->add_option("--match-radius", eval_radius, "Centroid match radius, m");
  eval->add_option("-o,--output", eval_out, "Summary table output");
  eval->add_flag("-q,--quiet", eval_quiet, "Skip the human-readable summary on stderr");

  ConfigFlags bench_cfg;
  SceneFlags bench_scene;
  std::vector<std::size_t> bench_sizes{1000, 2000, 4000, 8000};
  std::size_t bench_repeats = 200;
  auto* bench = app.add_subcommand("bench", "Latency benchmark");
  bench_cfg.attach(bench, true, true);
  bench_scene.attach(bench);
  bench->add_option("--sizes", bench_sizes, "Filter-scaling frame sizes")->delimiter(',');
  bench->add_option("--repeats", bench_repeats, "Timed repetitions per size");

  ConfigFlags rules_cfg;
  auto* rules = app.add_subcommand("rules", "Print the classification rules");
  rules_cfg.attach(rules, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) return run_simulate(sim_scene, sim_out, sim_truth);
    if (*filt) return run_filter(filt_cfg, filt_in, filt_out, filt_report);
    if (*clus) return run_cluster(clus_cfg, clus_in, clus_out);
    if (*cls) return run_classify(cls_cfg, cls_in, cls_clusters, cls_out);
    if (*pipe) return run_pipeline_cmd(pipe_cfg, pipe_in, pipe_out, pipe_report);
    if (*eval) {
      return run_evaluate(eval_cfg, eval_radius, eval_det, eval_truth, eval_report,
                          eval_out, eval_quiet);
    }
    if (*bench) return run_bench(bench_cfg, bench_scene, bench_sizes, bench_repeats);
    if (*rules) {
      std::cout << rules_cfg.load().rules.describe();
      return 0;
    }
  } catch (const dr::Error& e) {
    std::cerr << "dustradar: " << dr::to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "dustradar: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
