#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dustradar/pipeline.hpp"
#include "dustradar/scene_sim.hpp"

namespace dustradar {

struct LatencyPercentiles {
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
};

// Nearest-rank percentiles; all zero for an empty sample.
LatencyPercentiles latency_percentiles(std::vector<double> samples_ms);
double nearest_rank_percentile(std::span<const double> sorted, double pct);

// Greedy nearest-first one-to-one matching of detected centroids to true
// positions; pairs farther apart than `radius` never match. Returns the
// number of matched pairs.
std::size_t match_count(std::span<const Vec3> detected,
                        std::span<const Vec3> truth, double radius);

struct LevelSummary {
  int dust_level = 0;
  std::size_t frames = 0;
  double mean_raw_points = 0.0;
  double mean_kept_points = 0.0;
  double mean_detected_pedestrians = 0.0;
  double mean_true_pedestrians = 0.0;
  // Per-frame precision/recall averaged over the level's frames. A frame
  // with no predictions scores precision 1.0; a frame with no true
  // pedestrians scores recall 1.0. Both cases are counted below.
  double precision = 1.0;
  double recall = 1.0;
  std::size_t frames_without_predictions = 0;
  std::size_t frames_without_truth = 0;
  LatencyPercentiles latency_ms;
};

struct EvalSummary {
  std::vector<LevelSummary> levels;  // ascending dust level
  bool has_reports = false;          // kept points and latency are valid

  std::string describe() const;
};

// Scores Pedestrian detections against ground truth. Frames are aligned by
// seq: every detection or report seq must exist in `truth` (a truth frame
// without detection rows has zero detections). `reports` may be empty, in
// which case kept points and latency are left at zero. Throws
// Error(kFrameMismatch).
EvalSummary evaluate(std::span<const FrameDetections> detections,
                     std::span<const FrameReport> reports,
                     std::span<const GroundTruth> truth, double match_radius);

void write_summary_table(std::ostream& out, const EvalSummary& summary);

}  // namespace dustradar
