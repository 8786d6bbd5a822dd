#include "dustradar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"

namespace dustradar {

double nearest_rank_percentile(std::span<const double> sorted, double pct) {
  if (sorted.empty()) return 0.0;
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

LatencyPercentiles latency_percentiles(std::vector<double> samples_ms) {
  std::sort(samples_ms.begin(), samples_ms.end());
  return {nearest_rank_percentile(samples_ms, 50.0),
          nearest_rank_percentile(samples_ms, 95.0),
          nearest_rank_percentile(samples_ms, 99.0)};
}

std::size_t match_count(std::span<const Vec3> detected,
                        std::span<const Vec3> truth, double radius) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < detected.size(); ++i) {
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const double d = norm(detected[i] - truth[j]);
      if (d <= radius) pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> det_used(detected.size(), false);
  std::vector<bool> truth_used(truth.size(), false);
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (det_used[i] || truth_used[j]) continue;
    det_used[i] = truth_used[j] = true;
    ++matched;
  }
  return matched;
}

EvalSummary evaluate(std::span<const FrameDetections> detections,
                     std::span<const FrameReport> reports,
                     std::span<const GroundTruth> truth, double match_radius) {
  std::unordered_map<std::uint64_t, std::size_t> truth_index;
  for (std::size_t i = 0; i < truth.size(); ++i) truth_index[truth[i].seq] = i;

  std::vector<const FrameDetections*> det_for(truth.size(), nullptr);
  for (const FrameDetections& d : detections) {
    auto it = truth_index.find(d.seq);
    if (it == truth_index.end()) {
      throw Error(ErrorKind::kFrameMismatch,
                  "detections for seq " + std::to_string(d.seq) +
                      " have no ground truth");
    }
    det_for[it->second] = &d;
  }
  std::vector<const FrameReport*> report_for(truth.size(), nullptr);
  if (!reports.empty()) {
    if (reports.size() != truth.size()) {
      throw Error(ErrorKind::kFrameMismatch,
                  std::to_string(reports.size()) + " reports for " +
                      std::to_string(truth.size()) + " ground-truth frames");
    }
    for (const FrameReport& r : reports) {
      auto it = truth_index.find(r.seq);
      if (it == truth_index.end()) {
        throw Error(ErrorKind::kFrameMismatch,
                    "report for seq " + std::to_string(r.seq) +
                        " has no ground truth");
      }
      report_for[it->second] = &r;
    }
  }

  struct Accum {
    LevelSummary s;
    double precision_sum = 0.0;
    double recall_sum = 0.0;
    std::vector<double> latencies;
  };
  std::map<int, Accum> by_level;

  std::vector<Vec3> predicted;
  std::vector<Vec3> actual;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const GroundTruth& g = truth[i];
    Accum& acc = by_level[g.dust_level];
    acc.s.dust_level = g.dust_level;
    ++acc.s.frames;

    predicted.clear();
    if (det_for[i]) {
      for (const Detection& d : det_for[i]->detections) {
        if (d.label == ClassLabel::kPedestrian) predicted.push_back(d.descriptor.centroid);
      }
    }
    actual.clear();
    for (const TruePedestrian& p : g.pedestrians) actual.push_back(p.position);

    const std::size_t tp = match_count(predicted, actual, match_radius);
    if (predicted.empty()) {
      ++acc.s.frames_without_predictions;
      acc.precision_sum += 1.0;
    } else {
      acc.precision_sum += static_cast<double>(tp) / predicted.size();
    }
    if (actual.empty()) {
      ++acc.s.frames_without_truth;
      acc.recall_sum += 1.0;
    } else {
      acc.recall_sum += static_cast<double>(tp) / actual.size();
    }
    acc.s.mean_detected_pedestrians += predicted.size();
    acc.s.mean_true_pedestrians += actual.size();
    acc.s.mean_raw_points += g.labels.size();
    if (const FrameReport* r = report_for[i]) {
      acc.s.mean_kept_points += r->filter.kept_count;
      acc.latencies.push_back(r->latency_ms);
    }
  }

  EvalSummary out;
  out.has_reports = !reports.empty();
  for (auto& [level, acc] : by_level) {
    LevelSummary s = acc.s;
    const auto n = static_cast<double>(s.frames);
    s.mean_raw_points /= n;
    s.mean_kept_points /= n;
    s.mean_detected_pedestrians /= n;
    s.mean_true_pedestrians /= n;
    s.precision = acc.precision_sum / n;
    s.recall = acc.recall_sum / n;
    s.latency_ms = latency_percentiles(std::move(acc.latencies));
    out.levels.push_back(s);
  }
  return out;
}

void write_summary_table(std::ostream& out, const EvalSummary& summary) {
  out << "dust_level,frames,mean_raw_points,mean_kept_points,"
         "mean_detected_pedestrians,mean_true_pedestrians,precision,recall,"
         "frames_without_predictions,frames_without_truth,latency_p50_ms,"
         "latency_p95_ms,latency_p99_ms\n";
  for (const LevelSummary& s : summary.levels) {
    out << s.dust_level << ',' << s.frames << ','
        << format_number(s.mean_raw_points) << ','
        << format_number(s.mean_kept_points) << ','
        << format_number(s.mean_detected_pedestrians) << ','
        << format_number(s.mean_true_pedestrians) << ','
        << format_number(s.precision) << ',' << format_number(s.recall) << ','
        << s.frames_without_predictions << ',' << s.frames_without_truth << ','
        << format_number(s.latency_ms.p50) << ','
        << format_number(s.latency_ms.p95) << ','
        << format_number(s.latency_ms.p99) << '\n';
  }
  check_sink(out, "summary table");
}

std::string EvalSummary::describe() const {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  for (const LevelSummary& s : levels) {
    out << "dust level " << s.dust_level << " (" << s.frames << " frames)\n"
        << "  raw points/frame        " << s.mean_raw_points << '\n';
    if (has_reports) {
      out << "  kept points/frame       " << s.mean_kept_points << '\n';
    }
    out << "  pedestrians/frame       " << s.mean_detected_pedestrians
        << " detected, " << s.mean_true_pedestrians << " true\n"
        << "  precision / recall      " << s.precision << " / " << s.recall
        << '\n'
        << "  frames w/o predictions  " << s.frames_without_predictions << '\n';
    if (has_reports) {
      out << "  latency p50/p95/p99 ms  " << s.latency_ms.p50 << " / "
          << s.latency_ms.p95 << " / " << s.latency_ms.p99 << '\n';
    }
  }
  return out.str();
}

}  // namespace dustradar
