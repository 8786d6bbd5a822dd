#include "dustradar/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "dustradar/clustering.hpp"
#include "dustradar/kdtree.hpp"

namespace dustradar {

std::size_t FrameDetections::pedestrian_count() const {
  return static_cast<std::size_t>(
      std::count_if(detections.begin(), detections.end(), [](const Detection& d) {
        return d.label == ClassLabel::kPedestrian;
      }));
}

FrameResult process_frame(const Frame& frame, const PipelineConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  FrameResult r;
  auto [filtered, report] = filter_frame(frame, config.filter, &r.kept_indices);
  const KdTree tree = build_kdtree(filtered);
  r.clustering = extract_clusters(filtered, tree, config.cluster.distance,
                                  config.cluster.min_cluster_size);
  r.detections.detections =
      classify_frame(filtered, r.clustering, config.rules, config.rcs_bin_width);

  const auto stop = Clock::now();

  r.detections.seq = frame.seq;
  r.detections.timestamp = frame.timestamp;
  r.report.seq = frame.seq;
  r.report.timestamp = frame.timestamp;
  r.report.filter = report;
  r.report.cluster_count = r.clustering.clusters.size();
  r.report.pedestrian_count = r.detections.pedestrian_count();
  r.report.latency_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return r;
}

std::vector<FrameResult> run_pipeline_detailed(std::span<const Frame> frames,
                                               const PipelineConfig& config) {
  std::vector<FrameResult> results(frames.size());
  const std::size_t workers =
      std::min<std::size_t>(config.io.threads, frames.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      results[i] = process_frame(frames[i], config);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < frames.size(); i = next++) {
      try {
        results[i] = process_frame(frames[i], config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = frames.size();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

PipelineOutput run_pipeline(std::span<const Frame> frames,
                            const PipelineConfig& config) {
  std::vector<FrameResult> detailed = run_pipeline_detailed(frames, config);
  PipelineOutput out;
  out.detections.reserve(detailed.size());
  out.reports.reserve(detailed.size());
  out.latencies_ms.reserve(detailed.size());
  for (FrameResult& r : detailed) {
    out.latencies_ms.push_back(r.report.latency_ms);
    out.reports.push_back(r.report);
    out.detections.push_back(std::move(r.detections));
  }
  return out;
}

}  // namespace dustradar
