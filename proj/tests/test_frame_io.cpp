#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dustradar/classify.hpp"
#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"
#include "dustradar/pipeline.hpp"
#include "dustradar/scene_sim.hpp"
#include "test_helpers.hpp"

using namespace dustradar;

namespace {

void expect_close(double a, double b) {
  EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(b))) << a << " vs " << b;
}

void expect_points_close(const RadarPoint& a, const RadarPoint& b) {
  expect_close(a.x, b.x);
  expect_close(a.y, b.y);
  expect_close(a.z, b.z);
  expect_close(a.rcs, b.rcs);
  expect_close(a.v, b.v);
  expect_close(a.azimuth, b.azimuth);
  expect_close(a.elevation, b.elevation);
}

std::size_t parse_error_line(const std::string& text, ErrorKind expected_kind) {
  std::istringstream in(text);
  try {
    read_frames(in);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), expected_kind) << e.what();
    return e.line();
  }
  ADD_FAILURE() << "no error for: " << text;
  return 0;
}

}  // namespace

TEST(FrameIo, EmptyInputGivesNoFrames) {
  std::istringstream in("");
  EXPECT_TRUE(read_frames(in).empty());
  std::istringstream comments("# nothing here\n\n");
  EXPECT_TRUE(read_frames(comments).empty());
}

TEST(FrameIo, SingleBoresightPoint) {
  std::istringstream in("0 0 1 5 0 0 10 -1.5 0 0\n");
  const auto frames = read_frames(in);
  ASSERT_EQ(frames.size(), 1u);
  const RadarPoint expected = from_spherical(5.0, 0.0, 0.0, 10.0, -1.5);
  ASSERT_EQ(frames[0].points.size(), 1u);
  expect_points_close(frames[0].points[0], expected);
}

TEST(FrameIo, RandomRoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> count(0, 60);
  std::vector<Frame> frames;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    frames.push_back(dustradar::testing::random_frame(rng, count(rng), s * 3 + 1));
  }
  std::ostringstream out;
  write_frames(out, frames);
  std::istringstream in(out.str());
  const auto back = read_frames(in);
  ASSERT_EQ(back.size(), frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(back[i].seq, frames[i].seq);
    expect_close(back[i].timestamp, frames[i].timestamp);
    ASSERT_EQ(back[i].points.size(), frames[i].points.size());
    for (std::size_t k = 0; k < frames[i].points.size(); ++k) {
      expect_points_close(back[i].points[k], frames[i].points[k]);
    }
  }
}

TEST(FrameIo, NumbersAreShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-2.0), "-2");
  for (double v : {1.0 / 3.0, 1e-300, -123456.789, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(FrameIo, MalformedLinesReportLineNumber) {
  EXPECT_EQ(parse_error_line("0 0 0\n1 0.1 1 5 0\n", ErrorKind::kParseError), 2u);
  EXPECT_EQ(parse_error_line("# c\n0 abc 0\n", ErrorKind::kParseError), 2u);
  EXPECT_EQ(parse_error_line("0 0 0 extra\n", ErrorKind::kParseError), 1u);
  EXPECT_EQ(parse_error_line("0 0 1 5 0 0 10 1 0 nan\n", ErrorKind::kParseError), 1u);
  // Angles inconsistent with the position (azimuth 30 deg on boresight).
  EXPECT_EQ(parse_error_line("0 0 1 5 0 0 10 1 30 0\n", ErrorKind::kParseError), 1u);
}

TEST(FrameIo, SeqMustIncrease) {
  EXPECT_EQ(parse_error_line("1 0 0\n\n1 0.1 0\n", ErrorKind::kNonMonotonicSeq), 3u);
  EXPECT_EQ(parse_error_line("5 0 0\n4 0.1 0\n", ErrorKind::kNonMonotonicSeq), 2u);
  EXPECT_EQ(parse_error_line("0 1.0 0\n1 0.5 0\n", ErrorKind::kNonMonotonicSeq), 2u);
}

TEST(FrameIo, ValidationCanBeSkipped) {
  std::istringstream in("0 0 1 5 0 0 10 1 30 0\n");
  ReadOptions opts;
  opts.angle_tolerance.reset();
  EXPECT_EQ(read_frames(in, opts).size(), 1u);
}

TEST(FrameIo, DetectionsHeaderOnlyWhenEmpty) {
  std::ostringstream out;
  write_detections_header(out);
  write_detections(out, FrameDetections{});
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.rfind("seq,timestamp,cluster_id,label,rule,", 0), 0u);
  std::istringstream in(text);
  EXPECT_TRUE(read_detections(in).empty());
}

TEST(FrameIo, OneDetectionOneRow) {
  Frame f;
  f.seq = 4;
  f.timestamp = 0.4;
  for (int i = 0; i < 5; ++i) {
    f.points.push_back(from_cartesian({3.0 + 0.1 * i, 0.05 * i, 0.2 * i}, -5.0, 1.0));
  }
  Clustering c;
  c.labels.assign(5, 0);
  c.clusters = {{0, 1, 2, 3, 4}};
  const PipelineConfig cfg = default_pipeline_config();
  FrameDetections det{f.seq, f.timestamp, classify_frame(f, c, cfg.rules, cfg.rcs_bin_width)};
  std::vector<FrameDetections> all{det};
  std::ostringstream out;
  write_detections(out, std::span<const FrameDetections>(all));
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const std::string header = text.substr(0, text.find('\n'));
  const std::string row = text.substr(text.find('\n') + 1);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','),
            std::count(row.begin(), row.end(), ','));

  std::istringstream in(text);
  const auto back = read_detections(in);
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].detections.size(), 1u);
  const Detection& a = back[0].detections[0];
  const Detection& b = det.detections[0];
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(a.rule, b.rule);
  EXPECT_EQ(a.descriptor.size, b.descriptor.size);
  expect_close(a.descriptor.mean_velocity, b.descriptor.mean_velocity);
  expect_close(a.descriptor.centroid.x, b.descriptor.centroid.x);
  expect_close(a.descriptor.extent.z, b.descriptor.extent.z);
  expect_close(a.descriptor.range, b.descriptor.range);
}

TEST(FrameIo, WritersAreByteDeterministic) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 30;
  s.dust.level = 2;
  std::vector<Frame> frames;
  for (auto& f : simulate(s)) frames.push_back(std::move(f.frame));
  const PipelineConfig cfg = default_pipeline_config();
  auto render = [&] {
    std::ostringstream out;
    write_frames(out, frames);
    write_detections(out, std::span<const FrameDetections>(run_pipeline(frames, cfg).detections));
    return out.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(FrameIo, TruthRoundTrip) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 10;
  s.dust.level = 1;
  std::ostringstream out;
  std::vector<GroundTruth> truth;
  for (const SimFrame& f : simulate(s)) {
    write_truth(out, f.truth);
    truth.push_back(f.truth);
  }
  std::istringstream in(out.str());
  const auto back = read_truth(in);
  ASSERT_EQ(back.size(), truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_EQ(back[i].seq, truth[i].seq);
    EXPECT_EQ(back[i].dust_level, truth[i].dust_level);
    EXPECT_EQ(back[i].labels, truth[i].labels);
    ASSERT_EQ(back[i].pedestrians.size(), truth[i].pedestrians.size());
    for (std::size_t k = 0; k < truth[i].pedestrians.size(); ++k) {
      EXPECT_EQ(back[i].pedestrians[k].id, truth[i].pedestrians[k].id);
      expect_close(back[i].pedestrians[k].position.x, truth[i].pedestrians[k].position.x);
    }
  }
}

TEST(FrameIo, ClusteringRoundTrip) {
  std::mt19937_64 rng(5);
  const Frame f = dustradar::testing::random_frame(rng, 300, 2);
  const Clustering c = extract_clusters(f, ClusterParams{2.0, 2});
  std::ostringstream out;
  write_clustering(out, f.seq, c);
  std::istringstream in(out.str());
  const auto back = read_clusterings(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].seq, 2u);
  EXPECT_EQ(back[0].clustering.labels, c.labels);
  EXPECT_EQ(back[0].clustering.clusters, c.clusters);
}

TEST(FrameIo, ReportRoundTrip) {
  FrameReport r;
  r.seq = 3;
  r.timestamp = 0.3;
  r.filter.input_count = 10;
  r.filter.kept_count = 4;
  r.filter.rejected_by_rule = {1, 2, 3, 0};
  r.cluster_count = 2;
  r.pedestrian_count = 1;
  r.latency_ms = 0.25;
  std::ostringstream out;
  write_report_header(out);
  write_report(out, r);
  std::istringstream in(out.str());
  const auto back = read_reports(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].filter.rejected_by_rule, r.filter.rejected_by_rule);
  EXPECT_EQ(back[0].pedestrian_count, 1u);
  EXPECT_DOUBLE_EQ(back[0].latency_ms, 0.25);
}

TEST(FrameIo, FailedSinkThrows) {
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  try {
    check_sink(out, "test");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSinkError);
  }
}
