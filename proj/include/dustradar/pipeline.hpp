#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dustradar/classify.hpp"
#include "dustradar/config.hpp"
#include "dustradar/noise_filter.hpp"
#include "dustradar/point_model.hpp"

namespace dustradar {

struct FrameReport {
  std::uint64_t seq = 0;
  double timestamp = 0.0;
  FilterReport filter;
  std::size_t cluster_count = 0;
  std::size_t pedestrian_count = 0;
  double latency_ms = 0.0;
};

struct FrameDetections {
  std::uint64_t seq = 0;
  double timestamp = 0.0;
  std::vector<Detection> detections;

  std::size_t pedestrian_count() const;
};

// Everything run_pipeline knows about one frame. `kept_indices` and
// `clustering` refer to the filtered frame; kept_indices[i] is the raw index
// of filtered point i.
struct FrameResult {
  FrameDetections detections;
  FrameReport report;
  std::vector<std::size_t> kept_indices;
  Clustering clustering;
};

// filter -> kd-tree -> clusters -> classify for one frame. Latency is the
// wall-clock time of that chain.
FrameResult process_frame(const Frame& frame, const PipelineConfig& config);

struct PipelineOutput {
  std::vector<FrameDetections> detections;
  std::vector<FrameReport> reports;
  std::vector<double> latencies_ms;
};

// Processes frames in input order. With config.io.threads > 1 frames are
// spread over a bounded worker pool; results are still emitted in input
// order and latency stays per-frame.
PipelineOutput run_pipeline(std::span<const Frame> frames,
                            const PipelineConfig& config);

// Same, but keeps the per-frame intermediate state.
std::vector<FrameResult> run_pipeline_detailed(std::span<const Frame> frames,
                                               const PipelineConfig& config);

}  // namespace dustradar
