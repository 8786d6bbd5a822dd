#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dustradar/clustering.hpp"
#include "dustradar/pipeline.hpp"
#include "dustradar/point_model.hpp"
#include "dustradar/scene_sim.hpp"

namespace dustradar {

// Line formats (whitespace separated, '#' starts a comment line, blank lines
// ignored). Numbers are written in shortest round-trip decimal form and are
// locale independent.
//
//   frames:   seq timestamp n  x y z rcs v azimuth_deg elevation_deg  (x n)
//   truth:    seq dust_level n  label (x n)  m  id x y z (x m)
//             label is P<id>, G, D or S (pedestrian, ghost, dust, structure)
//   clusters: seq n  cluster_id (x n), -1 for unclustered
//
// Detections and per-frame reports are comma-separated tables with a header.

std::string format_number(double value);

struct ReadOptions {
  // Angular consistency tolerance applied to every point read; nullopt skips
  // point validation.
  std::optional<double> angle_tolerance = kIngestAngleTolerance;
};

// Streaming reader. Frames must have strictly increasing seq and
// non-decreasing timestamps. Throws ParseError (kind kParseError or
// kNonMonotonicSeq) carrying the 1-based line number.
class FrameReader {
 public:
  explicit FrameReader(std::istream& in, ReadOptions options = {});

  std::optional<Frame> next();
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  ReadOptions options_;
  std::size_t line_ = 0;
  std::optional<std::uint64_t> last_seq_;
  double last_timestamp_ = 0.0;
};

std::vector<Frame> read_frames(std::istream& in, ReadOptions options = {});
void write_frame(std::ostream& out, const Frame& frame);
void write_frames(std::ostream& out, std::span<const Frame> frames);

std::vector<GroundTruth> read_truth(std::istream& in);
void write_truth(std::ostream& out, const GroundTruth& truth);

struct FrameClustering {
  std::uint64_t seq = 0;
  Clustering clustering;
};

// Rebuilds member lists from labels; ids must be dense from 0.
std::vector<FrameClustering> read_clusterings(std::istream& in);
void write_clustering(std::ostream& out, std::uint64_t seq,
                      const Clustering& clustering);

void write_detections_header(std::ostream& out);
void write_detections(std::ostream& out, const FrameDetections& frame);
void write_detections(std::ostream& out,
                      std::span<const FrameDetections> frames);
std::vector<FrameDetections> read_detections(std::istream& in);

void write_report_header(std::ostream& out);
void write_report(std::ostream& out, const FrameReport& report);
void write_report(std::ostream& out, std::span<const FrameReport> reports);
std::vector<FrameReport> read_reports(std::istream& in);

// Throws Error(kSinkError) if the stream is in a failed state.
void check_sink(const std::ostream& out, std::string_view what);

}  // namespace dustradar
